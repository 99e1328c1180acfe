#include "toolroco/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#ifndef TOOLROCO_SOURCE_DIR
#define TOOLROCO_SOURCE_DIR "."
#endif

namespace toolroco {

namespace {

std::filesystem::path& fixture_dir_storage() {
    static std::filesystem::path dir = [] {
        if (const char* env = std::getenv("TOOLROCO_FIXTURES")) {
            return std::filesystem::path(env);
        }
        return std::filesystem::path(TOOLROCO_SOURCE_DIR) / "fixtures";
    }();
    return dir;
}

}  // namespace

const std::filesystem::path& fixture_dir() { return fixture_dir_storage(); }

void set_fixture_dir(std::filesystem::path dir) { fixture_dir_storage() = std::move(dir); }

namespace {

const std::map<std::string, std::string>& feedback_templates() {
    static std::once_flag once;
    static std::map<std::string, std::string> templates;
    std::call_once(once, [] {
        auto path = fixture_dir() / "feedback.json";
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open feedback fixture: " + path.string());
        }
        nlohmann::json j = nlohmann::json::parse(in);
        for (const auto& [key, value] : j.at("templates").items()) {
            templates[key] = value.get<std::string>();
        }
    });
    return templates;
}

}  // namespace

const std::string& feedback_template(const std::string& key) {
    const auto& templates = feedback_templates();
    auto it = templates.find(key);
    if (it == templates.end()) {
        throw std::out_of_range("no feedback template '" + key + "'");
    }
    return it->second;
}

std::string format_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size();) {
        if (tmpl[i] == '{') {
            auto end = tmpl.find('}', i);
            if (end != std::string::npos) {
                auto key = tmpl.substr(i + 1, end - i - 1);
                auto it = values.find(key);
                if (it != values.end()) {
                    out += it->second;
                    i = end + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::string feedback_message(const std::string& key,
                             const std::map<std::string, std::string>& values) {
    return format_template(feedback_template(key), values);
}

}  // namespace toolroco
