/*
 * Copyright 2026 The coweak Authors
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

#ifndef COWEAK_COWEAK_HPP
#define COWEAK_COWEAK_HPP

// Core library. io.hpp and cli.hpp are separate: they need json.hpp and CLI11.hpp.

#include "coweak/bisim.hpp"
#include "coweak/common.hpp"
#include "coweak/ctmc.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/laxflow.hpp"
#include "coweak/monoid.hpp"
#include "coweak/partition.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/probweak.hpp"
#include "coweak/quantale.hpp"
#include "coweak/saturation.hpp"
#include "coweak/state_space.hpp"
#include "coweak/timed.hpp"

#endif // COWEAK_COWEAK_HPP
