#pragma once

#include <string>

#include <json.hpp>

namespace cosserat {

using Json = nlohmann::json;

// One pipeline command. config carries the command-specific parameters (see
// README for the schemas); out_dir receives every produced file. The returned
// manifest embeds the fully resolved configuration and all measured results,
// and is also written to out_dir as manifest-<command>.json. No timestamps or
// machine identifiers: identical inputs give identical bytes.
Json run_command(const std::string& command, const Json& config,
                 const std::string& out_dir, int threads, bool verbose);

}  // namespace cosserat
