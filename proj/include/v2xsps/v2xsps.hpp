/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The v2x-sps Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "v2xsps/assignment.hpp"
#include "v2xsps/assignment_core.hpp"
#include "v2xsps/config.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/experiment.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/hungarian.hpp"
#include "v2xsps/matrix.hpp"
#include "v2xsps/metrics.hpp"
#include "v2xsps/pipeline.hpp"
#include "v2xsps/rng.hpp"
#include "v2xsps/scenario.hpp"
#include "v2xsps/sideinfo.hpp"
#include "v2xsps/solvers.hpp"
