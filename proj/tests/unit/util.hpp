#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "somepairs/graph.hpp"

namespace testutil {

// Per-process scratch directory; contents are overwritten freely between cases.
inline std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "somepairs_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::set<std::pair<int, int>> edge_set(const somepairs::ConnectionGraph& g) {
    std::set<std::pair<int, int>> out;
    for (const auto& e : g.edges()) out.insert({e.x, e.y});
    return out;
}

inline int popcount32(std::uint32_t v) {
    int c = 0;
    while (v != 0) {
        c += static_cast<int>(v & 1u);
        v >>= 1;
    }
    return c;
}

// All k-element subsets of {0, ..., n-1}, lexicographic.
inline std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= n - (k - static_cast<int>(cur.size())); ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace testutil
