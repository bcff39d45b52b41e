/* Copyright (c) 2026 The scenaware Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <map>
#include <string>

namespace scenaware::cli {

// Flat key=value text. Blank lines and lines starting with '#' are ignored;
// whitespace around keys and values is trimmed. Later keys override earlier.
// Throws std::invalid_argument naming the offending line.
std::map<std::string, std::string> ParseConfig(const std::string& text);
std::map<std::string, std::string> LoadConfig(const std::string& path);

}  // namespace scenaware::cli
