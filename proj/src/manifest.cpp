#include "fairtrade/manifest.hpp"

#include "fairtrade/error.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace fairtrade {

namespace {

std::string to_hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

constexpr std::string_view kHeader = "fairtrade-manifest 1";

} // namespace

void Manifest::set(std::string key, std::string value)
{
    if (key.empty() || key.find_first_of(" \n=") != std::string::npos || value.find('\n') != std::string::npos) {
        throw DataError("invalid manifest entry '" + key + "'");
    }
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> Manifest::get(std::string_view key) const
{
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::string Manifest::hash() const
{
    std::uint64_t h = fnv1a("");
    for (const auto& [k, v] : entries_) {
        h = fnv1a(k, h);
        h = fnv1a("=", h);
        h = fnv1a(v, h);
        h = fnv1a("\n", h);
    }
    return to_hex(h);
}

void Manifest::write(std::ostream& out) const
{
    out << kHeader << '\n';
    for (const auto& [k, v] : entries_) {
        out << k << ' ' << v << '\n';
    }
    out << "# hash " << hash() << '\n';
}

Manifest Manifest::read(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw DataError("not a fairtrade manifest");
    }
    Manifest m;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto space = line.find(' ');
        if (space == std::string::npos) {
            m.set(line, "");
        } else {
            m.set(line.substr(0, space), line.substr(space + 1));
        }
    }
    return m;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state)
{
    for (const unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::string file_digest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::uint64_t h = fnv1a("");
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    }
    return to_hex(h);
}

} // namespace fairtrade
