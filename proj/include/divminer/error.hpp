// Copyright 2026 The divminer Authors
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

#ifndef DIVMINER_ERROR_HPP_
#define DIVMINER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace divminer {

// Failure categories. The C API maps these one-to-one onto dm_status.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kUndefinedOutcome,
  kRecordCap,
  kMissingSubset,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace divminer

#endif  // DIVMINER_ERROR_HPP_
