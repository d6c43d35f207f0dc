// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_ERROR_HPP_
#define LICHEN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lichen {

enum class errc {
  degenerate_polygon,
  invalid_geometry,
  corrupt_rle,
  shape_mismatch,
  validation,
  integrity,
  parse,
  invalid_crop,
  too_small,
  insufficient_data,
  bad_parameter,
  unsorted_input,
  placement_failed,
  io,
};

/// Domain error carrying a machine-checkable code alongside the message.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace lichen

#endif  // LICHEN_ERROR_HPP_
