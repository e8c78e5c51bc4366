#pragma once

#include <stdexcept>
#include <string>

namespace kgsynth {

/// Base for every error the library raises. `kind()` is a stable
/// machine-readable tag; the CLI reports it in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message);

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define KGSYNTH_ERROR(Name, tag)                                                   \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& message) : Error(tag, message) {}         \
    }

KGSYNTH_ERROR(ParseError, "parse");
KGSYNTH_ERROR(IntegrityError, "integrity");
KGSYNTH_ERROR(UnknownCodeError, "unknown_code");
KGSYNTH_ERROR(UnknownNodeError, "unknown_node");
KGSYNTH_ERROR(MalformedCodeError, "malformed_code");
KGSYNTH_ERROR(DomainError, "domain");
KGSYNTH_ERROR(ConfigError, "config");
KGSYNTH_ERROR(InfeasibleError, "infeasible");
KGSYNTH_ERROR(NoSymptomsError, "no_symptoms");
KGSYNTH_ERROR(PlaceholderError, "placeholder");
KGSYNTH_ERROR(AuthError, "auth");
KGSYNTH_ERROR(CheckpointError, "checkpoint_corrupt");
KGSYNTH_ERROR(SplitError, "split");
KGSYNTH_ERROR(ProviderError, "provider");
KGSYNTH_ERROR(TrainingError, "training");
KGSYNTH_ERROR(IoError, "io");

#undef KGSYNTH_ERROR

/// Backend failure carrying the request id it belongs to.
class BackendError : public Error {
public:
    BackendError(std::string request_id, const std::string& message);

    const std::string& request_id() const noexcept { return request_id_; }

private:
    std::string request_id_;
};

/// A backend response that could not be turned into the expected structure.
/// The raw text is kept so it can be reviewed by hand.
class UnparseableResponseError : public Error {
public:
    UnparseableResponseError(std::string raw, const std::string& message);

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

}  // namespace kgsynth
