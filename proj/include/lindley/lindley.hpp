#pragma once

#include "lindley/numerics.hpp"
#include "lindley/freq.hpp"
#include "lindley/bayes.hpp"
#include "lindley/paradox.hpp"
#include "lindley/practical.hpp"
#include "lindley/mc.hpp"
#include "lindley/output.hpp"
