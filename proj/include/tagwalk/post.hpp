#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tagwalk {

/// One annotation: a user tags a resource with a set of tags at a time.
/// `tags` is kept sorted and duplicate-free.
struct Post {
  std::string user;
  std::string resource;
  std::int64_t timestamp = 0;
  std::vector<std::string> tags;

  bool has_tag(std::string_view tag) const {
    return std::binary_search(tags.begin(), tags.end(), tag);
  }

  friend bool operator==(const Post&, const Post&) = default;
};

}  // namespace tagwalk
