#pragma once

// Everything except the command-line front end (multroot/cli.hpp), which
// additionally needs nlohmann/json.

#include "multroot/errors.hpp"
#include "multroot/gcd.hpp"
#include "multroot/linalg.hpp"
#include "multroot/pejroot.hpp"
#include "multroot/pipeline.hpp"
#include "multroot/poly.hpp"
#include "multroot/structure.hpp"
