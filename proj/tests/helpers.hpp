#pragma once

#include <fstream>
#include <sstream>
#include <string>

#ifndef FIXTURE_DIR
#define FIXTURE_DIR "tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }
