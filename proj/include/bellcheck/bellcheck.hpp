#pragma once

#include "bellcheck/probability_set.hpp"
#include "bellcheck/simplex.hpp"
#include "bellcheck/lhv_core.hpp"
#include "bellcheck/joint_feasibility.hpp"
#include "bellcheck/inequalities.hpp"
#include "bellcheck/quantum_experiments.hpp"
#include "bellcheck/lhv_search.hpp"
#include "bellcheck/sampling.hpp"
#include "bellcheck/harness/errors.hpp"
#include "bellcheck/harness/count_dataset.hpp"
#include "bellcheck/harness/config.hpp"
#include "bellcheck/harness/digest.hpp"
#include "bellcheck/harness/analysis.hpp"
#include "bellcheck/harness/report.hpp"
#include "bellcheck/harness/serialization.hpp"
#include "bellcheck/harness/pipelines.hpp"
