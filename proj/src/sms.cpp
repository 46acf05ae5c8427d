#include "carguard/sms.hpp"

namespace carguard {

bool is_phone_number(std::string_view number) {
    if (!number.empty() && number.front() == '+') number.remove_prefix(1);
    if (number.size() < 3 || number.size() > 15) return false;
    for (char c : number) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool is_valid_body(std::string_view body) {
    if (body.size() > kMaxSmsBody) return false;
    return body.find('\x1A') == std::string_view::npos && body.find('\r') == std::string_view::npos;
}

}  // namespace carguard
