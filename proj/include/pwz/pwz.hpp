// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include "pwz/analysis.hpp"
#include "pwz/compressor.hpp"
#include "pwz/errors.hpp"
#include "pwz/expr.hpp"
#include "pwz/haar.hpp"
#include "pwz/region.hpp"
#include "pwz/search.hpp"
#include "pwz/signal.hpp"
#include "pwz/sparse_format.hpp"
#include "pwz/svg.hpp"
