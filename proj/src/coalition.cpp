/**
 * \file coalition.cpp
 *
 * \brief Coalition mask helpers.
 *
 * <hr/>
 *
 * Copyright 2026 The coinvest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coinvest/coalition.hpp"

namespace coinvest {

std::string mask_to_string(Mask m) {
  if (m == 0) return "{}";
  std::string out = "{";
  bool first = true;
  for (int p : mask_members(m)) {
    if (!first) out += ",";
    first = false;
    out += (p == 0) ? "inp" : "sp" + std::to_string(p);
  }
  out += "}";
  return out;
}

}  // namespace coinvest
