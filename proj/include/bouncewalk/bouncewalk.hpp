// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header for the whole library.

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/balance.hpp"
#include "bouncewalk/bouncer.hpp"
#include "bouncewalk/config.hpp"
#include "bouncewalk/errors.hpp"
#include "bouncewalk/experiment.hpp"
#include "bouncewalk/field.hpp"
#include "bouncewalk/format.hpp"
#include "bouncewalk/rng.hpp"
#include "bouncewalk/spectrum.hpp"
#include "bouncewalk/spinfield.hpp"
#include "bouncewalk/stats.hpp"
#include "bouncewalk/walker.hpp"
