#pragma once

#include "alphaode/alpha.hpp"
#include "alphaode/baselines.hpp"
#include "alphaode/errors.hpp"
#include "alphaode/expr.hpp"
#include "alphaode/jet.hpp"
#include "alphaode/problems.hpp"
#include "alphaode/report.hpp"
#include "alphaode/system.hpp"
#include "alphaode/taylor.hpp"
