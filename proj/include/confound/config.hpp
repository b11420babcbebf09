#pragma once

#include <filesystem>

#include <json.hpp>

#include "confound/can.hpp"
#include "confound/detector.hpp"
#include "confound/generators.hpp"
#include "confound/manifold.hpp"
#include "confound/scorers.hpp"

namespace confound {

using Json = nlohmann::json;

// JSON (de)serialization. Readers accept partial objects: absent keys keep
// their defaults. Unknown enum names raise InvalidArgument.

Json to_json(const ScorerConfig& cfg);
ScorerConfig scorer_config_from_json(const Json& j, ScorerConfig base = {});

Json to_json(const EmbeddingConfig& cfg);
EmbeddingConfig embedding_config_from_json(const Json& j, EmbeddingConfig base = {});

Json to_json(const ThresholdTable& table);
ThresholdTable threshold_table_from_json(const Json& j);

Json to_json(const DetectorConfig& cfg);
DetectorConfig detector_config_from_json(const Json& j, DetectorConfig base = {});

Json to_json(const CanConfig& cfg);
CanConfig can_config_from_json(const Json& j, CanConfig base = {});

Json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const Json& j, GeneratorSpec base = {});

Json to_json(const DeltaStats& stats);

/// Report record {dataset_id, verdict, mean, var, deltas}.
Json verdict_record(std::string_view dataset_id, const CausalVerdict& verdict, const DeltaStats& stats);

/// Parses a file, throwing IoError or FormatError.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace confound
