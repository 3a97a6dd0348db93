//
// Copyright 2026 The przcdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Minimal RFC-4180 record reader/writer shared by table ingestion and the
// command-line outputs.

#ifndef PRZCDP_CSV_H_
#define PRZCDP_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace przcdp::csv {

using Record = std::vector<std::string>;

// Splits `text` into records. Quoted fields may contain separators, quotes
// ("") and line breaks. Accepts LF or CRLF line endings and a trailing newline.
absl::StatusOr<std::vector<Record>> Parse(std::string_view text);

// Quotes the field only when it contains a comma, quote, CR or LF.
std::string EscapeField(std::string_view field);
std::string FormatRecord(const Record& record);

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
absl::Status WriteFileAtomically(const std::filesystem::path& path,
                                 std::string_view contents);

}  // namespace przcdp::csv

#endif  // PRZCDP_CSV_H_
