#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fairtrade {

/// Ordered key/value record of the choices that define a dataset run: input
/// digest, column roles, split seed and preprocessing. Written next to every
/// output so results declare how they were produced.
class Manifest {
public:
    void set(std::string key, std::string value);
    [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    /// 16 hex digits of FNV-1a over the canonical "key=value\n" lines.
    [[nodiscard]] std::string hash() const;

    void write(std::ostream& out) const;
    static Manifest read(std::istream& in);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

/// FNV-1a digest of a file's bytes as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

} // namespace fairtrade
