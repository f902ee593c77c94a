#pragma once

#include "mtmc/assignment.hpp"
#include "mtmc/diagnostics.hpp"
#include "mtmc/event_measures.hpp"
#include "mtmc/geometry.hpp"
#include "mtmc/id_measures.hpp"
#include "mtmc/io.hpp"
#include "mtmc/scenario.hpp"
#include "mtmc/synth.hpp"
#include "mtmc/types.hpp"
