#pragma once

// Plumbing for the amenlab command line: index lists, flat key=value config
// files, atomic output, and a bounded parallel map.

#include "amenlab/error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace amenlab::cli {

/// "100", "10,20,40" or "start:stop[:step]" (inclusive).
inline std::vector<std::size_t> parse_index_list(const std::string& spec) {
    std::vector<std::size_t> out;
    auto to_index = [&](const std::string& s) -> std::size_t {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos != s.size() || v < 0) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw Error(Errc::parse_error, "bad index '" + s + "' in list '" + spec + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3) throw Error(Errc::parse_error, "range must be start:stop[:step]");
        const auto start = to_index(parts[0]), stop = to_index(parts[1]);
        const auto step = parts.size() == 3 ? to_index(parts[2]) : std::size_t{1};
        if (step == 0) throw Error(Errc::parse_error, "range step must be positive");
        for (auto v = start; v <= stop; v += step) out.push_back(v);
    } else {
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(to_index(p));
    }
    if (out.empty()) throw Error(Errc::parse_error, "empty index list '" + spec + "'");
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] <= out[i - 1]) throw Error(Errc::parse_error, "index list must increase: '" + spec + "'");
    }
    return out;
}

/// "random:N" -> N.
inline std::size_t parse_random_count(const std::string& spec) {
    const std::string prefix = "random:";
    if (spec.rfind(prefix, 0) != 0) throw Error(Errc::parse_error, "expected random:N, got '" + spec + "'");
    return parse_index_list(spec.substr(prefix.size())).front();
}

/// "z:d" -> d.
inline int parse_group(const std::string& spec) {
    if (spec.size() < 3 || spec.rfind("z:", 0) != 0) {
        throw Error(Errc::parse_error, "group must be z:d, got '" + spec + "'");
    }
    const auto d = parse_index_list(spec.substr(2)).front();
    return static_cast<int>(d);
}

/// Flat `key = value` file; blank lines and lines starting with '#' are
/// skipped. Returns arguments of the form --key=value.
inline std::vector<std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse_error, "cannot open config file '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": empty key");
        if (value == "true") {
            args.push_back("--" + key);
        } else if (value != "false") {
            args.push_back("--" + key + "=" + value);
        }
    }
    return args;
}

/// Writes to stdout when path is empty or "-", otherwise to a temporary
/// sibling that is renamed into place.
inline void write_artifact(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::invalid_input, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw Error(Errc::invalid_input, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

/// Worker count: LAB_THREADS when set (>= 1), otherwise hardware concurrency.
inline std::size_t thread_budget() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return hw;
}

/// results[i] = fn(i) for i < count, computed on up to thread_budget() workers.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
    std::vector<T> results(count);
    const std::size_t workers = std::min(thread_budget(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) results[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace amenlab::cli
