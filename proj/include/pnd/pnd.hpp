#pragma once

#include "polynomial.hpp"
#include "hermite.hpp"
#include "quadform.hpp"
#include "quadrature.hpp"
#include "minimize.hpp"
#include "distribution.hpp"
#include "charfn.hpp"
#include "positivity.hpp"
#include "decompose.hpp"
#include "verify.hpp"
#include "io.hpp"
