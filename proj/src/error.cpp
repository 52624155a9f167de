#include "fdkb/error.hpp"

namespace fdkb {

const ErrorInfo& error_info(ErrorCode code) {
    for (const auto& info : kErrorTable) {
        if (info.code == code) return info;
    }
    // Unreachable while the table is complete; tests enumerate it.
    static const ErrorInfo unknown{ErrorCode::IoError, "IoError", 500};
    return unknown;
}

std::string_view error_name(ErrorCode code) { return error_info(code).name; }

int http_status(ErrorCode code) { return error_info(code).http_status; }

} // namespace fdkb
