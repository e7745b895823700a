#pragma once

#include "checker.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "gamespec.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "trace.hpp"
#include "verdict.hpp"
