// ser/cli.hpp

// Copyright 2026 SER Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SER_CLI_HPP_
#define SER_CLI_HPP_

namespace ser {
namespace cli {

// Entry point for the `ser` tool. Dispatches to one of the subcommands
// (extract, train, predict, evaluate, compare, synth) and returns the process
// exit code: 0 on success, 1 on a domain error (message on stderr naming the
// error case), 2 on a usage error. Partial output files are removed when a
// subcommand fails.
int runCli(int argc, const char* const* argv);

}  // namespace cli
}  // namespace ser

#endif  // SER_CLI_HPP_
