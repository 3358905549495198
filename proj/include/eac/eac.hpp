#pragma once

#include "catalog.hpp"
#include "checker.hpp"
#include "complex_multiquad.hpp"
#include "delta.hpp"
#include "fiber.hpp"
#include "forms.hpp"
#include "hull.hpp"
#include "instance.hpp"
#include "matrix.hpp"
#include "multiquad.hpp"
#include "pipeline.hpp"
#include "segre.hpp"
#include "selftest.hpp"
#include "solver.hpp"
#include "subspace.hpp"
#include "variety.hpp"
#include "weierstrass.hpp"
