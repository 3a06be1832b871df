#pragma once

#include <string>
#include <vector>

namespace lapdog {

// Shared tokenization for metrics and models: lowercase, punctuation split
// off as separate tokens, whitespace-delimited. "I like Cats!" ->
// [i, like, cats, !].
std::vector<std::string> normalize(const std::string &text);

std::string join(const std::vector<std::string> &parts, const std::string &sep = " ");

std::string lowercase(std::string s);

} // namespace lapdog
