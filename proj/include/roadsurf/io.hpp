#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadsurf/features.hpp"
#include "roadsurf/geometry.hpp"
#include "roadsurf/pipeline.hpp"
#include "roadsurf/synthgen.hpp"

namespace roadsurf {

// Frame stream, JSON-lines: {"t_ms": .., "v_mps": .., "pts": [[x,y,z,refl],..]}
void write_stream_jsonl(const std::vector<PointCloudFrame>& frames,
                        const std::filesystem::path& path);
// Rejects non-monotone timestamps.
std::vector<PointCloudFrame> read_stream_jsonl(
    const std::filesystem::path& path);

// Ground-truth sidecar, JSON-lines: {"t_ms": .., "left": .., "right": ..}
void write_labels_jsonl(const LabeledStream& stream,
                        const std::filesystem::path& path);
std::vector<std::pair<ClassLabel, ClassLabel>> read_labels_jsonl(
    const std::filesystem::path& path);

// Dataset file "RSDS": little-endian binary, versioned header, then
// (region u8, dim f32 features, n_c f32 target) records.
void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// Profile config and scenario specs as JSON.
void save_profiles(const ProfileMap& profiles,
                   const std::filesystem::path& path);
ProfileMap load_profiles(const std::filesystem::path& path);
ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

// Streaming output record for one near region.
std::string to_output_record(const FrameOutput& out);

}  // namespace roadsurf
