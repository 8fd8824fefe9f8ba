#ifndef FORESTALG_TESTKIT_BRUTE_PARITY_HPP
#define FORESTALG_TESTKIT_BRUTE_PARITY_HPP

// Parity games solved by trying every pair of positional strategies, plus a
// seeded generator of small random games.

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "forestalg/parity_game.hpp"

namespace forestalg::testkit {

/// Verifier wins from v iff some positional Verifier strategy beats every
/// positional Refuter strategy.  Exponential; meant for games of <= ~10
/// positions.
inline std::vector<Player> brute_solve(const ParityGame& g)
{
    const int n = static_cast<int>(g.size());
    auto dead_winner = [&](int v) {
        const auto& p = g.positions[v];
        return p.terminal_winner.value_or(opponent(p.owner));
    };
    // the play from v under a complete choice vector is a lasso
    auto play = [&](int v, const std::vector<int>& choice) {
        std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
        std::vector<int> path;
        while (true) {
            if (g.successors[v].empty()) return dead_winner(v);
            if (seen_at[v] >= 0) {
                int top = -1;
                for (std::size_t i = static_cast<std::size_t>(seen_at[v]); i < path.size(); ++i)
                    top = std::max(top, g.positions[path[i]].priority);
                return top % 2 == 0 ? Player::Verifier : Player::Refuter;
            }
            seen_at[v] = static_cast<int>(path.size());
            path.push_back(v);
            v = g.successors[v][choice[v]];
        }
    };

    std::vector<int> mine, theirs;
    for (int v = 0; v < n; ++v) {
        if (g.successors[v].empty()) continue;
        (g.positions[v].owner == Player::Verifier ? mine : theirs).push_back(v);
    }
    // odometer over the choices of a set of positions
    auto next = [&](std::vector<int>& choice, const std::vector<int>& who) {
        for (int v : who) {
            if (++choice[v] < static_cast<int>(g.successors[v].size())) return true;
            choice[v] = 0;
        }
        return false;
    };

    std::vector<Player> winner(static_cast<std::size_t>(n), Player::Refuter);
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    std::vector<char> won(static_cast<std::size_t>(n), 0);
    do {
        std::vector<char> all_good(static_cast<std::size_t>(n), 1);
        for (int v : theirs) choice[v] = 0;
        do {
            for (int v = 0; v < n; ++v)
                if (all_good[v] && play(v, choice) == Player::Refuter) all_good[v] = 0;
        } while (next(choice, theirs));
        for (int v = 0; v < n; ++v) won[v] = won[v] || all_good[v];
    } while (next(choice, mine));
    for (int v = 0; v < n; ++v) winner[v] = won[v] ? Player::Verifier : Player::Refuter;
    return winner;
}

/// Random game with `n` positions, priorities 0..max_priority and out-degree
/// 0..max_out; dead ends get a declared winner half of the time.
inline ParityGame random_game(std::mt19937_64& rng, int n, int max_priority = 4, int max_out = 3)
{
    if (n < 1) throw std::invalid_argument("random_game needs at least one position");
    auto u = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    ParityGame g;
    for (int v = 0; v < n; ++v) g.add_position(u(0, 1) ? Player::Refuter : Player::Verifier, u(0, max_priority));
    for (int v = 0; v < n; ++v) {
        int out = u(0, 9) == 0 ? 0 : u(1, max_out);
        std::vector<int> targets;
        for (int i = 0; i < out; ++i) {
            int w = u(0, n - 1);
            if (std::find(targets.begin(), targets.end(), w) == targets.end()) targets.push_back(w);
        }
        for (int w : targets) g.add_edge(v, w);
        if (targets.empty() && u(0, 1)) g.positions[v].terminal_winner = u(0, 1) ? Player::Refuter : Player::Verifier;
    }
    return g;
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_BRUTE_PARITY_HPP
