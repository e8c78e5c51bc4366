#include "kgsynth/common/icd.hpp"

#include "kgsynth/common/error.hpp"

namespace kgsynth {
namespace {

bool upper(char c) { return c >= 'A' && c <= 'Z'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

bool is_category_code(std::string_view code) noexcept {
    return code.size() == 3 && upper(code[0]) && digit(code[1]) && digit(code[2]);
}

std::optional<IcdCategory> IcdCategory::try_parse(std::string_view code) {
    if (!is_category_code(code)) return std::nullopt;
    return IcdCategory(std::string(code));
}

IcdCategory IcdCategory::parse(std::string_view code) {
    if (auto c = try_parse(code)) return *c;
    throw MalformedCodeError("not an ICD-10 category code: '" + std::string(code) + "'");
}

IcdCategory truncate_to_category(std::string_view full_code) {
    const auto bad = [&] {
        return MalformedCodeError("malformed ICD-10 code: '" + std::string(full_code) + "'");
    };
    if (full_code.size() < 3 || !is_category_code(full_code.substr(0, 3))) throw bad();
    auto rest = full_code.substr(3);
    if (!rest.empty()) {
        if (rest[0] != '.' || rest.size() < 2 || rest.size() > 3) throw bad();
        for (char c : rest.substr(1))
            if (!digit(c)) throw bad();
    }
    return IcdCategory::parse(full_code.substr(0, 3));
}

}  // namespace kgsynth
