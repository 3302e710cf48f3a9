/*!
  \file celltune.hpp
  \brief Convenience header pulling in the whole library
*/

#pragma once

#include "agent.hpp"
#include "aig.hpp"
#include "aiger_io.hpp"
#include "bandit.hpp"
#include "blif.hpp"
#include "cell_library.hpp"
#include "cuts.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "function_expr.hpp"
#include "liberty.hpp"
#include "mapper.hpp"
#include "matcher.hpp"
#include "netlist.hpp"
#include "pareto.hpp"
#include "qnet.hpp"
#include "rng.hpp"
#include "sizing.hpp"
#include "sta.hpp"
#include "truth_table.hpp"
#include "tuner.hpp"
