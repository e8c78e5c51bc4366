#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace kgsynth {

/// ICD-10 category code: one uppercase Latin letter and two digits ("K81").
/// Subcategory suffixes are not representable; truncate first.
class IcdCategory {
public:
    static std::optional<IcdCategory> try_parse(std::string_view code);
    /// Throws MalformedCodeError.
    static IcdCategory parse(std::string_view code);

    const std::string& code() const noexcept { return code_; }

    auto operator<=>(const IcdCategory&) const = default;

private:
    explicit IcdCategory(std::string code) : code_(std::move(code)) {}
    std::string code_;
};

bool is_category_code(std::string_view code) noexcept;

/// "K81.0" -> "K81", "M54" -> "M54". Accepts an optional ".d" or ".dd" suffix.
IcdCategory truncate_to_category(std::string_view full_code);

}  // namespace kgsynth

template <>
struct std::hash<kgsynth::IcdCategory> {
    std::size_t operator()(const kgsynth::IcdCategory& c) const noexcept {
        return std::hash<std::string>{}(c.code());
    }
};
