#pragma once

#include "purity/estimators.hpp"
#include "purity/random.hpp"
#include "purity/samplers.hpp"
#include "purity/states.hpp"
