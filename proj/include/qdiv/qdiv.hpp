#pragma once

#include "cli.hpp"
#include "complex_matrix.hpp"
#include "errors.hpp"
#include "measures.hpp"
#include "spectral.hpp"
#include "state_io.hpp"
#include "states.hpp"
