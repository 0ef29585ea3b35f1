#pragma once

#include <filesystem>
#include <fstream>
#include <string>

// Writes `body` to a fresh file under the system temp directory.
inline std::filesystem::path write_temp(const std::string& name, const std::string& body)
{
    const auto dir = std::filesystem::temp_directory_path() / "cfmm_unit";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << body;
    return path;
}
