#pragma once

// Umbrella header: the whole library in one include.

#include "jumpcode/basis.hpp"
#include "jumpcode/codes.hpp"
#include "jumpcode/designs.hpp"
#include "jumpcode/dynamics.hpp"
#include "jumpcode/errors.hpp"
#include "jumpcode/recovery.hpp"
#include "jumpcode/rng.hpp"
#include "jumpcode/serialize.hpp"
#include "jumpcode/state.hpp"
#include "jumpcode/trajectory.hpp"
#include "jumpcode/version.hpp"
