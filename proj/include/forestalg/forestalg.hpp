#ifndef FORESTALG_FORESTALG_HPP
#define FORESTALG_FORESTALG_HPP

#include "forestalg/algebra.hpp"
#include "forestalg/automaton.hpp"
#include "forestalg/equations.hpp"
#include "forestalg/forest.hpp"
#include "forestalg/forest_io.hpp"
#include "forestalg/formula.hpp"
#include "forestalg/graph.hpp"
#include "forestalg/nfa.hpp"
#include "forestalg/parity_game.hpp"
#include "forestalg/random.hpp"
#include "forestalg/terms.hpp"
#include "forestalg/types.hpp"
#include "forestalg/validation.hpp"

#endif  // FORESTALG_FORESTALG_HPP
