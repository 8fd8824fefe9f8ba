#ifndef FORESTALG_TESTKIT_TESTKIT_HPP
#define FORESTALG_TESTKIT_TESTKIT_HPP

// Brute-force oracles and generators used by the test suites.

#include "forestalg/testkit/brute_accepts.hpp"
#include "forestalg/testkit/brute_marked.hpp"
#include "forestalg/testkit/brute_parity.hpp"
#include "forestalg/testkit/enumerate.hpp"
#include "forestalg/testkit/equiv_pairs.hpp"
#include "forestalg/testkit/game_equiv.hpp"
#include "forestalg/testkit/syntactic_sampler.hpp"

#endif  // FORESTALG_TESTKIT_TESTKIT_HPP
