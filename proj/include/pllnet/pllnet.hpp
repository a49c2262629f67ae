#pragma once

// Library umbrella; the command-line layer lives under pllnet/cli.
#include "pllnet/charfun.hpp"
#include "pllnet/error.hpp"
#include "pllnet/lambert_w.hpp"
#include "pllnet/model.hpp"
#include "pllnet/parallel.hpp"
#include "pllnet/phase_difference.hpp"
#include "pllnet/phase_model.hpp"
#include "pllnet/quasi_polynomial.hpp"
#include "pllnet/simulator.hpp"
#include "pllnet/snmap.hpp"
#include "pllnet/spectrum.hpp"
