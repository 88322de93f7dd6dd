#pragma once

#include "shs/harness/boundary.hpp"
#include "shs/harness/examples.hpp"
#include "shs/harness/generate.hpp"
#include "shs/harness/problem.hpp"
#include "shs/harness/report.hpp"
#include "shs/harness/suite.hpp"
