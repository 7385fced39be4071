// SPDX-License-Identifier: Apache-2.0
//
// cachecomp: cache-induced opportunistic CoMP simulation and optimization
// Copyright (C) 2026 The cachecomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Umbrella header for the simulation library. The command-line front end
// (cli.hpp) additionally needs CLI11 and is not included here.

#ifndef CACHECOMP_CACHECOMP_HPP
#define CACHECOMP_CACHECOMP_HPP

#include "cache.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "precoder.hpp"
#include "rng.hpp"
#include "sim.hpp"
#include "streaming.hpp"
#include "validate.hpp"
#include "wmmse.hpp"

#endif
