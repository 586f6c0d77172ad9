#pragma once

#include "plsaddle/bounds.hpp"
#include "plsaddle/harness.hpp"
#include "plsaddle/inner_solver.hpp"
#include "plsaddle/outer_solver.hpp"
#include "plsaddle/problem.hpp"
#include "plsaddle/rng.hpp"
#include "plsaddle/validation.hpp"
