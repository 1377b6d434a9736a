#pragma once

#include "averages.hpp"
#include "budget.hpp"
#include "finset.hpp"
#include "index_stream.hpp"
#include "ordinal.hpp"
#include "quantities.hpp"
#include "rat_vec.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "schreier.hpp"
#include "spaces.hpp"
#include "verify.hpp"
