#ifndef FORESTALG_PARITY_GAME_HPP
#define FORESTALG_PARITY_GAME_HPP

// Two-player parity games.  The maximal priority seen infinitely often
// decides a play; Verifier wins iff it is even.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace forestalg {

enum class Player : std::uint8_t { Verifier = 0, Refuter = 1 };

inline Player opponent(Player p) { return p == Player::Verifier ? Player::Refuter : Player::Verifier; }
inline Player parity_winner(int priority) { return priority % 2 == 0 ? Player::Verifier : Player::Refuter; }

struct ParityGame {
    struct Position {
        Player owner = Player::Verifier;
        int priority = 0;
        std::optional<Player> terminal_winner;  // for positions without moves
    };

    std::vector<Position> positions;
    std::vector<std::vector<int>> successors;

    int add_position(Player owner, int priority)
    {
        positions.push_back({owner, priority, std::nullopt});
        successors.emplace_back();
        return static_cast<int>(positions.size() - 1);
    }
    int add_terminal(Player winner)
    {
        int p = add_position(opponent(winner), winner == Player::Verifier ? 0 : 1);
        positions[p].terminal_winner = winner;
        return p;
    }
    void add_edge(int from, int to) { successors.at(from).push_back(to); }
    [[nodiscard]] std::size_t size() const { return positions.size(); }
};

struct GameSolution {
    std::vector<Player> winner;
    std::vector<int> strategy;  // successor chosen by the winner at positions it owns, else -1

    [[nodiscard]] bool verifier_wins(int pos) const { return winner.at(pos) == Player::Verifier; }
};

namespace detail {

class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : n_(static_cast<int>(g.size()))
    {
        owner_.resize(n_);
        prio_.resize(n_);
        succ_ = g.successors;
        for (int v = 0; v < n_; ++v) {
            const auto& p = g.positions[v];
            owner_[v] = p.owner;
            prio_[v] = p.priority;
            if (!succ_[v].empty()) continue;
            // a dead end is a terminal; without a declared winner its owner loses
            Player w = p.terminal_winner.value_or(opponent(p.owner));
            prio_[v] = w == Player::Verifier ? 0 : 1;
            succ_[v] = {v};
        }
        pred_.resize(n_);
        for (int v = 0; v < n_; ++v)
            for (int w : succ_[v]) pred_[w].push_back(v);
        strategy_.assign(n_, -1);
        winner_.assign(n_, Player::Verifier);
    }

    GameSolution run()
    {
        std::vector<char> all(n_, 1);
        auto [w0, w1] = solve(all);
        for (int v = 0; v < n_; ++v) {
            winner_[v] = w1[v] ? Player::Refuter : Player::Verifier;
            if (owner_[v] != winner_[v]) strategy_[v] = -1;
        }
        return {winner_, strategy_};
    }

private:
    using Mask = std::vector<char>;

    // Attractor of `target` for player p inside `mask`; records attracting moves.
    Mask attractor(const Mask& mask, const Mask& target, Player p)
    {
        Mask attr(n_, 0);
        std::vector<int> count(n_, 0), queue;
        for (int v = 0; v < n_; ++v) {
            if (!mask[v]) continue;
            for (int w : succ_[v])
                if (mask[w]) ++count[v];
            if (target[v]) {
                attr[v] = 1;
                queue.push_back(v);
            }
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int w = queue[head];
            for (int v : pred_[w]) {
                if (!mask[v] || attr[v]) continue;
                if (owner_[v] == p) {
                    attr[v] = 1;
                    strategy_[v] = w;
                    queue.push_back(v);
                } else if (--count[v] == 0) {
                    attr[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        return attr;
    }

    static Mask minus(const Mask& a, const Mask& b)
    {
        Mask out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
        return out;
    }

    std::pair<Mask, Mask> solve(const Mask& mask)
    {
        Mask w0(n_, 0), w1(n_, 0);
        int top = -1;
        for (int v = 0; v < n_; ++v)
            if (mask[v]) top = std::max(top, prio_[v]);
        if (top < 0) return {w0, w1};
        Player i = parity_winner(top);

        Mask target(n_, 0);
        for (int v = 0; v < n_; ++v) target[v] = mask[v] && prio_[v] == top;
        Mask a = attractor(mask, target, i);
        auto sub = solve(minus(mask, a));
        Mask& sub_opp = i == Player::Verifier ? sub.second : sub.first;

        bool opp_empty = std::none_of(sub_opp.begin(), sub_opp.end(), [](char c) { return c != 0; });
        if (opp_empty) {
            // recompute attracting moves (the recursive call may have overwritten them)
            attractor(mask, target, i);
            for (int v = 0; v < n_; ++v) {
                if (!target[v] || owner_[v] != i) continue;
                for (int w : succ_[v])
                    if (mask[w]) {
                        strategy_[v] = w;
                        break;
                    }
            }
            Mask& mine = i == Player::Verifier ? w0 : w1;
            mine = mask;
            return {w0, w1};
        }

        Player j = opponent(i);
        Mask b = attractor(mask, sub_opp, j);
        auto rest = solve(minus(mask, b));
        Mask& wj = j == Player::Verifier ? w0 : w1;
        Mask& wi = i == Player::Verifier ? w0 : w1;
        const Mask& rest_j = j == Player::Verifier ? rest.first : rest.second;
        const Mask& rest_i = i == Player::Verifier ? rest.first : rest.second;
        for (int v = 0; v < n_; ++v) {
            wj[v] = b[v] || rest_j[v];
            wi[v] = rest_i[v];
        }
        return {w0, w1};
    }

    int n_;
    std::vector<Player> owner_;
    std::vector<int> prio_;
    std::vector<std::vector<int>> succ_, pred_;
    std::vector<int> strategy_;
    std::vector<Player> winner_;
};

}  // namespace detail

/// Recursive attractor decomposition (Zielonka).  Positions without moves are
/// won by their declared terminal winner, or else lost by their owner.
inline GameSolution solve(const ParityGame& g) { return detail::Zielonka(g).run(); }

}  // namespace forestalg

#endif  // FORESTALG_PARITY_GAME_HPP
