// Copyright 2026 The CBBA-PR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBBA_CBBA_HPP
#define CBBA_CBBA_HPP

#include "cbba/core.hpp"
#include "cbba/bundle.hpp"
#include "cbba/consensus.hpp"
#include "cbba/graph.hpp"
#include "cbba/replan.hpp"
#include "cbba/oracle.hpp"
#include "cbba/netsim.hpp"
#include "cbba/scenario.hpp"
#include "cbba/harness.hpp"

#endif  // CBBA_CBBA_HPP
