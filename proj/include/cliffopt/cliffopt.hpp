#pragma once

#include "bits.hpp"
#include "canonical.hpp"
#include "circuit.hpp"
#include "codes.hpp"
#include "cost_model.hpp"
#include "database.hpp"
#include "database_io.hpp"
#include "gate.hpp"
#include "gf2.hpp"
#include "linear.hpp"
#include "peephole.hpp"
#include "qecc.hpp"
#include "sample.hpp"
#include "synth.hpp"
#include "tableau.hpp"
