#pragma once

#include "adversary.hpp"
#include "budget.hpp"
#include "cell.hpp"
#include "continuous.hpp"
#include "empirical.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "evaluation.hpp"
#include "limits.hpp"
#include "sample_buffer.hpp"
#include "scalar.hpp"
#include "source.hpp"
#include "sources.hpp"
#include "step_density.hpp"
#include "variation.hpp"
#include "io.hpp"
