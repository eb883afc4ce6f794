#pragma once

#include "rmshell/analytic_solver.hpp"
#include "rmshell/classical_reference.hpp"
#include "rmshell/errors.hpp"
#include "rmshell/linalg.hpp"
#include "rmshell/material.hpp"
#include "rmshell/presets.hpp"
#include "rmshell/profile.hpp"
#include "rmshell/special_functions.hpp"
#include "rmshell/verification.hpp"
