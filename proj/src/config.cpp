#include "confound/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

namespace {

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::string_view to_string(DisconnectedPolicy p) {
  return p == DisconnectedPolicy::GrowK ? "GrowK" : "LargestComponent";
}

DisconnectedPolicy policy_from_string(std::string_view s) {
  if (s == "GrowK") return DisconnectedPolicy::GrowK;
  if (s == "LargestComponent") return DisconnectedPolicy::LargestComponent;
  throw InvalidArgument(fmt::format("unknown disconnected policy '{}'", s));
}

Json bandwidth_json(const std::optional<double>& bw) {
  return bw ? Json(*bw) : Json("median");
}

std::optional<double> bandwidth_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "median") return std::nullopt;
    throw InvalidArgument(fmt::format("unknown bandwidth rule '{}'", j.get<std::string>()));
  }
  return j.get<double>();
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw FormatError(fmt::format("malformed config: {}", e.what()));
  }
}

}  // namespace

Json to_json(const ScorerConfig& cfg) {
  return {{"scorer", to_string(cfg.scorer)},
          {"delta", cfg.delta},
          {"bandwidth", bandwidth_json(cfg.bandwidth)},
          {"ridge", cfg.ridge}};
}

ScorerConfig scorer_config_from_json(const Json& j, ScorerConfig base) {
  return guarded([&] {
    if (j.contains("scorer")) base.scorer = scorer_from_string(j.at("scorer").get<std::string>());
    read_if(j, "delta", base.delta);
    read_if(j, "ridge", base.ridge);
    if (j.contains("bandwidth")) base.bandwidth = bandwidth_from_json(j.at("bandwidth"));
    base.validate();
    return base;
  });
}

Json to_json(const EmbeddingConfig& cfg) {
  return {{"k_neighbors", cfg.k_neighbors ? Json(*cfg.k_neighbors) : Json("auto")},
          {"disconnected_policy", to_string(cfg.disconnected_policy)}};
}

EmbeddingConfig embedding_config_from_json(const Json& j, EmbeddingConfig base) {
  return guarded([&] {
    if (j.contains("k_neighbors")) {
      const auto& k = j.at("k_neighbors");
      if (k.is_string() && k.get<std::string>() == "auto") {
        base.k_neighbors.reset();
      } else {
        base.k_neighbors = k.get<std::size_t>();
      }
    }
    if (j.contains("disconnected_policy")) {
      base.disconnected_policy = policy_from_string(j.at("disconnected_policy").get<std::string>());
    }
    base.validate();
    return base;
  });
}

Json to_json(const ThresholdTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows()) {
    rows.push_back({{"mean_low", r.mean_low},
                    {"mean_high", r.mean_high},
                    {"var_threshold", r.var_threshold},
                    {"below", to_string(r.below)},
                    {"above", to_string(r.above)},
                    {"failure_note", r.failure_note}});
  }
  return {{"boundary_policy", "LowerInclusive"}, {"rows", rows}};
}

ThresholdTable threshold_table_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("boundary_policy") && j.at("boundary_policy") != "LowerInclusive") {
      throw InvalidArgument("only the LowerInclusive boundary policy is supported");
    }
    std::vector<ThresholdRow> rows;
    for (const auto& r : j.at("rows")) {
      ThresholdRow row;
      row.mean_low = r.at("mean_low").get<double>();
      row.mean_high = r.at("mean_high").get<double>();
      row.var_threshold = r.at("var_threshold").get<double>();
      row.below = row_action_from_string(r.at("below").get<std::string>());
      row.above = row_action_from_string(r.at("above").get<std::string>());
      read_if(r, "failure_note", row.failure_note);
      rows.push_back(std::move(row));
    }
    return ThresholdTable(std::move(rows));
  });
}

Json to_json(const DetectorConfig& cfg) {
  return {{"scorer", to_json(cfg.scorer)},
          {"embedding", to_json(cfg.embedding)},
          {"n_bootstraps", cfg.n_bootstraps},
          {"subsample_fraction", cfg.subsample_fraction},
          {"table", to_json(cfg.table)},
          {"seed", cfg.seed}};
}

DetectorConfig detector_config_from_json(const Json& j, DetectorConfig base) {
  return guarded([&] {
    if (j.contains("scorer")) base.scorer = scorer_config_from_json(j.at("scorer"), base.scorer);
    if (j.contains("embedding")) base.embedding = embedding_config_from_json(j.at("embedding"), base.embedding);
    read_if(j, "n_bootstraps", base.n_bootstraps);
    read_if(j, "subsample_fraction", base.subsample_fraction);
    if (j.contains("table")) base.table = threshold_table_from_json(j.at("table"));
    read_if(j, "seed", base.seed);
    base.validate();
    return base;
  });
}

Json to_json(const CanConfig& cfg) {
  return {{"embedding", to_json(cfg.embedding)},
          {"ridge", cfg.ridge},
          {"bandwidth", bandwidth_json(cfg.bandwidth)},
          {"hsic_alpha", cfg.hsic_alpha},
          {"permutations", cfg.permutations},
          {"max_refits", cfg.max_refits},
          {"ratio_low", cfg.ratio_low},
          {"ratio_high", cfg.ratio_high}};
}

CanConfig can_config_from_json(const Json& j, CanConfig base) {
  return guarded([&] {
    if (j.contains("embedding")) base.embedding = embedding_config_from_json(j.at("embedding"), base.embedding);
    read_if(j, "ridge", base.ridge);
    if (j.contains("bandwidth")) base.bandwidth = bandwidth_from_json(j.at("bandwidth"));
    read_if(j, "hsic_alpha", base.hsic_alpha);
    read_if(j, "permutations", base.permutations);
    read_if(j, "max_refits", base.max_refits);
    read_if(j, "ratio_low", base.ratio_low);
    read_if(j, "ratio_high", base.ratio_high);
    base.validate();
    return base;
  });
}

Json to_json(const GeneratorSpec& spec) {
  Json j = {{"family", to_string(spec.family)},
            {"noise", to_string(spec.noise)},
            {"n", spec.n},
            {"seed", spec.seed},
            {"periodic", {{"period", spec.periodic.period}, {"lengthscale", spec.periodic.lengthscale}}}};
  j["lambda"] = spec.lambda ? Json(*spec.lambda) : Json(nullptr);
  return j;
}

GeneratorSpec generator_spec_from_json(const Json& j, GeneratorSpec base) {
  return guarded([&] {
    if (j.contains("family")) base.family = family_from_string(j.at("family").get<std::string>());
    if (j.contains("noise")) base.noise = noise_from_string(j.at("noise").get<std::string>());
    read_if(j, "n", base.n);
    read_if(j, "seed", base.seed);
    if (j.contains("lambda")) {
      base.lambda = j.at("lambda").is_null() ? std::nullopt : std::optional(j.at("lambda").get<double>());
    }
    if (j.contains("periodic")) {
      read_if(j.at("periodic"), "period", base.periodic.period);
      read_if(j.at("periodic"), "lengthscale", base.periodic.lengthscale);
    }
    base.validate();
    return base;
  });
}

Json to_json(const DeltaStats& stats) {
  return {{"mean", stats.mean}, {"var", stats.var}, {"deltas", stats.deltas}};
}

Json verdict_record(std::string_view dataset_id, const CausalVerdict& verdict, const DeltaStats& stats) {
  return {{"dataset_id", dataset_id},
          {"verdict", to_string(verdict.tag)},
          {"detail", verdict.detail},
          {"mean", stats.mean},
          {"var", stats.var},
          {"deltas", stats.deltas}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << j.dump(2) << '\n';
  if (!out) throw IoError(fmt::format("write error on '{}'", path.string()));
}

}  // namespace confound
