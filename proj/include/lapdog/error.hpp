#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace lapdog {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

namespace detail {
inline void msg_append(std::ostringstream &) {}
template <typename T, typename... Rest>
void msg_append(std::ostringstream &os, const T &head, const Rest &...rest) {
    os << head;
    msg_append(os, rest...);
}
} // namespace detail

template <typename... Args>
[[noreturn]] void fail(const Args &...args) {
    std::ostringstream os;
    detail::msg_append(os, args...);
    throw Error(os.str());
}

template <typename... Args>
void require(bool cond, const Args &...args) {
    if (!cond)
        fail(args...);
}

} // namespace lapdog
