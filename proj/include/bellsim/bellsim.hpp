#pragma once

#include "bellsim/angle.hpp"
#include "bellsim/coding.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/protocol.hpp"
#include "bellsim/quadrature.hpp"
#include "bellsim/rejection.hpp"
#include "bellsim/report.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/singlet.hpp"
#include "bellsim/stats.hpp"
#include "bellsim/summation.hpp"
