#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace toolroco {

// Root of the versioned fixture tree (tasks/, plans/, feedback.json).
// Resolution order: set_fixture_dir() > $TOOLROCO_FIXTURES > compiled-in
// source path.
const std::filesystem::path& fixture_dir();
void set_fixture_dir(std::filesystem::path dir);

// Frozen feedback message templates. Placeholders use {name} syntax.
const std::string& feedback_template(const std::string& key);
std::string format_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);
std::string feedback_message(const std::string& key,
                             const std::map<std::string, std::string>& values);

}  // namespace toolroco
