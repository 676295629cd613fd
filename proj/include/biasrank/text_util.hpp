#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace biasrank {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Canonical text key: trimmed, ASCII-lowercased, inner whitespace runs
// collapsed to one space. Used for deduplication and latent-score lookup.
inline std::string normalize_text(std::string_view raw) {
  std::string_view s = trim(raw);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) {
      out.push_back(' ');
    }
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace biasrank
