// gopaf/include/gopaf/commands.h

// Copyright 2026 The gopaf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOPAF_COMMANDS_H_
#define GOPAF_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gopaf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitUsage = 2;

// Runs the gopaf command line. args[0] is the program name. Records go to
// `out` unless an --output file is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gopaf

#endif  // GOPAF_COMMANDS_H_
