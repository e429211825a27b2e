#include "cuaplan/util/files.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cuaplan {

IoError::IoError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path(), ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    if (!out) throw IoError(path, "write failed");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path, std::string("invalid JSON: ") + e.what());
    }
}

std::filesystem::path repo_root() {
    if (const char* env = std::getenv("CUAPLAN_HOME"); env != nullptr && *env != '\0') {
        return env;
    }
#ifdef CUAPLAN_SOURCE_DIR
    return CUAPLAN_SOURCE_DIR;
#else
    return std::filesystem::current_path();
#endif
}

}  // namespace cuaplan
