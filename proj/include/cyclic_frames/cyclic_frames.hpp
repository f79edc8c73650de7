#pragma once

#include "cyclic.hpp"
#include "dynamical.hpp"
#include "erasure.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "io.hpp"
#include "numerics.hpp"
