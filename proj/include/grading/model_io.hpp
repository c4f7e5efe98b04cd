#ifndef GRADING_MODEL_IO_HPP_
#define GRADING_MODEL_IO_HPP_

#include <filesystem>
#include <string>

#include "grading/network.hpp"

namespace grading {

struct LoadedModel {
  Task task = Task::tomato;
  Network network;
};

// Versioned JSON document: structure fields plus one flat weight array per
// block. Weight values survive a save/load cycle bit-exactly. `config_echo`
// (optional, itself JSON) is stored verbatim under "config" for provenance.
void save_model(const std::filesystem::path& path, const Network& net,
                Task task, const std::string& config_echo = "");

LoadedModel load_model(const std::filesystem::path& path);

}  // namespace grading

#endif  // GRADING_MODEL_IO_HPP_
