/*
Copyright 2026 The exg authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef EXG_CLI_HPP
#define EXG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace exg::cli {

/// Runs the exg command line (args excludes the program name).
/// Exit status: 0 success, 2 usage or input error, 1 internal error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace exg::cli

#endif  // EXG_CLI_HPP
