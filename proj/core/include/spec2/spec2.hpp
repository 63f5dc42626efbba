// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spec2/enclosure.hpp"
#include "spec2/error.hpp"
#include "spec2/galerkin.hpp"
#include "spec2/geometry.hpp"
#include "spec2/linalg.hpp"
#include "spec2/models.hpp"
#include "spec2/pencil.hpp"
