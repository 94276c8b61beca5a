#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "graphcf/graph.hpp"
#include "graphcf/rng.hpp"

namespace testutil {

// Erdos-Renyi style random graph with weights drawn from the given alphabet
inline graphcf::Graph random_graph(const std::string& id, int n, double edge_prob,
                                   graphcf::Rng& rng,
                                   const std::vector<double>& weights = {1.0}) {
    graphcf::Graph g(id, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.bernoulli(edge_prob)) {
                const double w = weights[static_cast<std::size_t>(rng.uniform_int(
                    0, static_cast<int>(weights.size()) - 1))];
                g.set_weight(i, j, w);
            }
        }
    }
    return g;
}

inline graphcf::Graph path_graph(const std::string& id, int n) {
    graphcf::Graph g(id, n);
    for (int i = 0; i + 1 < n; ++i) g.set_weight(i, i + 1, 1.0);
    return g;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("graphcf_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

} // namespace testutil
