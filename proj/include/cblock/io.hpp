#pragma once

#include "cblock/canopy.hpp"
#include "cblock/record.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cblock {

// Schema file: JSON object, attribute name -> "string" | "integer".
Schema load_schema(const std::string& path);

// Dataset file: JSON lines, one {"id": ..., "attrs": {...}} per line.
// Missing attributes are preserved as null; unknown attributes and values
// that do not match the schema type are errors.
Dataset load_dataset(const std::string& path, const std::string& schema_path);

// Pairs file: headerless CSV `id1,id2`. Unordered duplicates collapse;
// self-pairs and unknown ids are errors.
TrainingSet load_pairs(const std::string& path, const Dataset& dataset);

// Assignment TSV: `record_id<TAB>round_index<TAB>canopy_id`, rounds 0-based,
// records in dataset order within each round.
void write_assignment(std::ostream& out, const CanopyAssignment& assign,
                      const Dataset& dataset);
void write_assignment_file(const std::string& path, const CanopyAssignment& assign,
                           const Dataset& dataset);

// Round of an assignment TSV as (canopy id, member record ids), in first-seen
// order. Used by the rollup and assign-machines subcommands, which do not
// need the dataset itself.
struct LoadedRound {
    std::vector<std::pair<std::string, std::vector<std::string>>> canopies;
};
std::vector<LoadedRound> load_assignment_tsv(const std::string& path);

}  // namespace cblock
