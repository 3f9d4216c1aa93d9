#pragma once

#include "fracbound/eigenbasis.hpp"
#include "fracbound/hkernel.hpp"
#include "fracbound/mixing.hpp"
#include "fracbound/subordinate.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracbound::app {

/// Schema violation or unreadable configuration. Maps to exit status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// JSON object view that remembers which keys were read, so leftovers can be
/// reported as unknown.
class Section {
public:
    Section(const nlohmann::json& node, std::string path);

    const std::string& path() const noexcept { return path_; }
    bool has(const std::string& key) const;

    const nlohmann::json& raw(const std::string& key);
    Section child(const std::string& key);

    double number(const std::string& key);
    double number(const std::string& key, double fallback);
    /// Strictly positive number.
    double positive(const std::string& key);
    double positive(const std::string& key, double fallback);
    std::uint64_t count(const std::string& key);
    std::uint64_t count(const std::string& key, std::uint64_t fallback);
    std::string text(const std::string& key);
    std::string text(const std::string& key, const std::string& fallback);
    bool flag(const std::string& key, bool fallback);
    std::vector<double> numbers(const std::string& key);

    /// Throws ConfigError naming any key that was never read.
    void finish() const;

private:
    const nlohmann::json& node_;
    std::string path_;
    std::set<std::string> used_;
};

[[noreturn]] void fail(const std::string& where, const std::string& what);

nlohmann::json load_json(const std::string& file);

BoxDomain parse_domain(Section s);
InitialDatum parse_datum(Section s, const BoxDomain& dom);
MixingMeasure parse_measure(Section s);
HRoute parse_route_name(const std::string& where, const std::string& name);
InversionMethod parse_inversion(const std::string& where, const std::string& name);

/// Either an explicit list or {"start", "stop", "count"} (inclusive, uniform).
std::vector<double> parse_grid(const nlohmann::json& node, const std::string& where);

/// Points as [[x1, ...], ...] or {"counts": [n_1, ...]} for a uniform grid
/// over the closed box.
std::vector<Point> parse_points(const nlohmann::json& node, const std::string& where, const BoxDomain& dom);

Point parse_point(const nlohmann::json& node, const std::string& where, const BoxDomain& dom);

}  // namespace fracbound::app
