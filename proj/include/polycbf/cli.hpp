// Copyright 2026 The polycbf Authors
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

#ifndef POLYCBF__CLI_HPP_
#define POLYCBF__CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace polycbf
{

/// Entry point behind the `polycbf` executable. `args` excludes the program
/// name. Subcommands: run, bench, validate, gen. Returns the process exit code.
int run_command(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace polycbf

#endif  // POLYCBF__CLI_HPP_
