#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsos/engine/run.hpp"

namespace testing_support {

inline std::filesystem::path corpus() { return DSOS_CORPUS_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> corpus_files(const std::string& sub, const std::string& ext) {
    std::vector<std::filesystem::path> out;
    for (const auto& f : std::filesystem::directory_iterator(corpus() / sub)) {
        if (f.path().extension() == ext) out.push_back(f.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline dsos::engine::UpgradeSchedule schedule_for(const std::filesystem::path& program,
                                                 const dsos::label::LabelSignature& sig) {
    const auto p = corpus() / "schedules" / (program.stem().string() + ".json");
    if (!std::filesystem::exists(p)) return {};
    return dsos::engine::parse_schedule(nlohmann::json::parse(slurp(p)), sig);
}

}  // namespace testing_support
