/*
 * Copyright 2026 The coopshare Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * \file coopshare/game.hpp
 *
 * \brief Production-distribution games: instance data, normalization,
 *  coalition values, minimum excess and core membership.
 *
 * A set of n producers sells a common commodity on m markets. Market j pays
 * price r_j per unit, producer i pays c_ij per unit delivered there, owns a
 * share d_ij of the demand of market j and has capacity q_i (possibly
 * unbounded). A coalition S earns the value of the transportation LP
 *
 *     max  sum_{i in S, j} alpha_ij y_ij
 *     s.t. sum_{i in S} y_ij  = sum_{i in S} d_ij   for every market j
 *          sum_j y_ij        <= q_i                 for every i in S
 *          y >= 0
 *
 * with unit profit alpha_ij = max(0, r_j - c_ij).
 *
 * Without capacities a single market reduces to sorted unit profits
 * alpha_1 >= ... >= alpha_n >= 0 and demand shares lambda summing to one;
 * then v(S) = alpha_{min S} * lambda(S). Algorithms on SingleMarketGame
 * work in that sorted, unit-demand space; SingleMarketGame carries the
 * permutation and demand scale that map results back to the instance.
 */

#ifndef COOPSHARE_GAME_HPP
#define COOPSHARE_GAME_HPP

#include <coopshare/coalition.hpp>
#include <coopshare/errors.hpp>
#include <coopshare/lp.hpp>
#include <coopshare/rational.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coopshare {

using Matrix = std::vector<std::vector<Rational>>;

/// Raw instance: prices, per-unit costs, demand shares and capacities.
struct Instance
{
	std::vector<std::string> player_names;
	std::vector<std::string> market_names;
	std::vector<Rational> price;                   // per market
	Matrix cost;                                   // player x market
	Matrix demand;                                 // player x market
	std::vector<std::optional<Rational>> capacity; // per player, nullopt = unbounded

	std::size_t players() const { return player_names.size(); }
	std::size_t markets() const { return market_names.size(); }

	/// Throws input_error naming the offending entry.
	void validate() const
	{
		const std::size_t n = players();
		const std::size_t m = markets();
		if (n == 0)
		{
			throw input_error("instance has no players");
		}
		if (m == 0)
		{
			throw input_error("instance has no markets");
		}
		if (price.size() != m)
		{
			throw input_error("price has " + std::to_string(price.size()) + " entries, expected " + std::to_string(m));
		}
		auto check_matrix = [&](const Matrix& mat, const char* name) {
			if (mat.size() != n)
			{
				throw input_error(std::string(name) + " has " + std::to_string(mat.size()) + " rows, expected "
				                  + std::to_string(n));
			}
			for (std::size_t i = 0; i < n; ++i)
			{
				if (mat[i].size() != m)
				{
					throw input_error(std::string(name) + " row " + std::to_string(i + 1) + " has "
					                  + std::to_string(mat[i].size()) + " entries, expected " + std::to_string(m));
				}
			}
		};
		check_matrix(cost, "cost");
		check_matrix(demand, "demand");
		if (capacity.size() != n)
		{
			throw input_error("capacity has " + std::to_string(capacity.size()) + " entries, expected "
			                  + std::to_string(n));
		}
		for (std::size_t i = 0; i < n; ++i)
		{
			Rational own;
			for (std::size_t j = 0; j < m; ++j)
			{
				if (demand[i][j] < 0)
				{
					throw input_error("negative demand d(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = "
					                  + to_string(demand[i][j]));
				}
				own += demand[i][j];
			}
			if (capacity[i])
			{
				if (*capacity[i] < 0)
				{
					throw input_error("negative capacity for player " + std::to_string(i + 1));
				}
				if (*capacity[i] < own)
				{
					throw input_error("capacity of player " + std::to_string(i + 1) + " (" + to_string(*capacity[i])
					                  + ") is below its own total demand (" + to_string(own) + ")");
				}
			}
		}
	}
};

/// Instance with unit profits alpha_ij = max(0, r_j - c_ij) in place of
/// prices and costs.
struct NormalizedInstance
{
	std::vector<std::string> player_names;
	std::vector<std::string> market_names;
	Matrix profit;
	Matrix demand;
	std::vector<std::optional<Rational>> capacity;
	/// r_j < c_ij: serving j from i loses money, any planned flow is dropped.
	std::vector<std::vector<bool>> unprofitable;

	std::size_t players() const { return player_names.size(); }
	std::size_t markets() const { return market_names.size(); }

	bool uncapacitated() const
	{
		return std::all_of(capacity.begin(), capacity.end(), [](const auto& q) { return !q.has_value(); });
	}

	Rational market_demand(std::size_t j) const
	{
		Rational total;
		for (const auto& row : demand)
		{
			total += row[j];
		}
		return total;
	}
};

inline NormalizedInstance normalize(const Instance& inst)
{
	inst.validate();
	NormalizedInstance out;
	out.player_names = inst.player_names;
	out.market_names = inst.market_names;
	out.demand = inst.demand;
	out.capacity = inst.capacity;
	const std::size_t n = inst.players();
	const std::size_t m = inst.markets();
	out.profit.assign(n, std::vector<Rational>(m));
	out.unprofitable.assign(n, std::vector<bool>(m, false));
	for (std::size_t i = 0; i < n; ++i)
	{
		for (std::size_t j = 0; j < m; ++j)
		{
			Rational margin = inst.price[j] - inst.cost[i][j];
			if (margin < 0)
			{
				out.unprofitable[i][j] = true;
			}
			else
			{
				out.profit[i][j] = margin;
			}
		}
	}
	return out;
}

/// Uncapacitated single-market game in canonical form: players sorted by
/// unit profit (descending, ties by original index) and demand shares
/// summing to one.
class SingleMarketGame
{
public:
	SingleMarketGame(std::vector<Rational> alpha, std::vector<Rational> lambda, std::vector<std::size_t> order,
	                 Rational scale)
	: alpha_(std::move(alpha)),
	  lambda_(std::move(lambda)),
	  order_(std::move(order)),
	  scale_(std::move(scale))
	{
		validate();
	}

	/// Game already in canonical form; identity permutation, unit scale.
	static SingleMarketGame from_sorted(std::vector<Rational> alpha, std::vector<Rational> lambda)
	{
		std::vector<std::size_t> order(alpha.size());
		std::iota(order.begin(), order.end(), std::size_t{0});
		return SingleMarketGame(std::move(alpha), std::move(lambda), std::move(order), Rational(1));
	}

	std::size_t size() const { return alpha_.size(); }
	const Rational& alpha(std::size_t k) const { return alpha_[k]; }
	const Rational& lambda(std::size_t k) const { return lambda_[k]; }
	const std::vector<Rational>& alphas() const { return alpha_; }
	const std::vector<Rational>& lambdas() const { return lambda_; }
	/// Original player of sorted position k.
	std::size_t original(std::size_t k) const { return order_[k]; }
	const std::vector<std::size_t>& order() const { return order_; }
	/// Total demand of the market in instance units.
	const Rational& scale() const { return scale_; }

	/// Sorted, unit-demand payoff -> instance order and units.
	std::vector<Rational> to_original(const std::vector<Rational>& sorted) const
	{
		check_length(sorted.size());
		std::vector<Rational> out(size());
		for (std::size_t k = 0; k < size(); ++k)
		{
			out[order_[k]] = sorted[k] * scale_;
		}
		return out;
	}

	std::vector<Rational> to_sorted(const std::vector<Rational>& original_payoff) const
	{
		check_length(original_payoff.size());
		std::vector<Rational> out(size());
		for (std::size_t k = 0; k < size(); ++k)
		{
			out[k] = original_payoff[order_[k]] / scale_;
		}
		return out;
	}

	Coalition to_original(const Coalition& sorted) const
	{
		Coalition out(size());
		for (std::size_t k : sorted.members())
		{
			out.insert(order_[k]);
		}
		return out;
	}

	Coalition to_sorted(const Coalition& original_coalition) const
	{
		Coalition out(size());
		for (std::size_t k = 0; k < size(); ++k)
		{
			if (original_coalition.contains(order_[k]))
			{
				out.insert(k);
			}
		}
		return out;
	}

private:
	void check_length(std::size_t length) const
	{
		if (length != size())
		{
			throw input_error("payoff vector has " + std::to_string(length) + " entries, game has "
			                  + std::to_string(size()) + " players");
		}
	}

	void validate() const
	{
		const std::size_t n = alpha_.size();
		if (n == 0)
		{
			throw input_error("single-market game without players");
		}
		if (lambda_.size() != n || order_.size() != n)
		{
			throw input_error("single-market game: alpha, lambda and order lengths differ");
		}
		Rational total;
		for (std::size_t k = 0; k < n; ++k)
		{
			if (k + 1 < n && alpha_[k] < alpha_[k + 1])
			{
				throw input_error("single-market game: alpha must be non-increasing");
			}
			if (lambda_[k] < 0)
			{
				throw input_error("single-market game: negative demand share");
			}
			total += lambda_[k];
		}
		if (alpha_[n - 1] < 0)
		{
			throw input_error("single-market game: negative unit profit");
		}
		if (total != 1)
		{
			throw input_error("single-market game: demand shares sum to " + to_string(total) + ", expected 1");
		}
		if (scale_ <= 0)
		{
			throw input_error("single-market game: demand scale must be positive");
		}
		std::vector<bool> seen(n, false);
		for (std::size_t p : order_)
		{
			if (p >= n || seen[p])
			{
				throw input_error("single-market game: order is not a permutation");
			}
			seen[p] = true;
		}
	}

	std::vector<Rational> alpha_;
	std::vector<Rational> lambda_;
	std::vector<std::size_t> order_;
	Rational scale_;
};

/// Canonical single-market game of market j (capacities are ignored).
inline SingleMarketGame to_single_market(const NormalizedInstance& inst, std::size_t market)
{
	if (market >= inst.markets())
	{
		throw input_error("market index " + std::to_string(market) + " out of range");
	}
	Rational total = inst.market_demand(market);
	if (total == 0)
	{
		throw degenerate_market_error("market '" + inst.market_names[market] + "' has zero total demand");
	}
	const std::size_t n = inst.players();
	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		return inst.profit[a][market] > inst.profit[b][market];
	});
	std::vector<Rational> alpha(n);
	std::vector<Rational> lambda(n);
	for (std::size_t k = 0; k < n; ++k)
	{
		alpha[k] = inst.profit[order[k]][market];
		lambda[k] = inst.demand[order[k]][market] / total;
	}
	return SingleMarketGame(std::move(alpha), std::move(lambda), std::move(order), total);
}

/// v(S) = alpha_{min S} * lambda(S), in unit-demand space. S is given in
/// sorted positions.
inline Rational value_single_market(const SingleMarketGame& g, const Coalition& s)
{
	if (s.empty())
	{
		return Rational(0);
	}
	Rational share;
	for (std::size_t k : s.members())
	{
		share += g.lambda(k);
	}
	return g.alpha(s.first()) * share;
}

struct CoalitionValue
{
	Rational value;
	/// Production plan y_ij (player x market); zero outside the coalition.
	Matrix plan;
};

enum class Evaluation
{
	automatic,      // closed form when uncapacitated, LP otherwise
	linear_program, // always solve the transportation LP
	closed_form     // uncapacitated only
};

namespace detail {

inline CoalitionValue value_closed_form(const NormalizedInstance& inst, const std::vector<std::size_t>& members)
{
	const std::size_t m = inst.markets();
	CoalitionValue out;
	out.plan.assign(inst.players(), std::vector<Rational>(m));
	for (std::size_t j = 0; j < m; ++j)
	{
		std::size_t best = members.front();
		Rational market_demand;
		for (std::size_t i : members)
		{
			if (inst.profit[i][j] > inst.profit[best][j])
			{
				best = i;
			}
			market_demand += inst.demand[i][j];
		}
		out.value += inst.profit[best][j] * market_demand;
		out.plan[best][j] = market_demand;
	}
	return out;
}

inline CoalitionValue value_lp(const NormalizedInstance& inst, const std::vector<std::size_t>& members)
{
	const std::size_t m = inst.markets();
	const std::size_t s = members.size();
	LinearProgram lp(s * m, Sense::maximize);
	for (std::size_t a = 0; a < s; ++a)
	{
		for (std::size_t j = 0; j < m; ++j)
		{
			lp.set_objective(a * m + j, inst.profit[members[a]][j]);
		}
	}
	for (std::size_t j = 0; j < m; ++j)
	{
		std::vector<Rational> row(s * m);
		Rational market_demand;
		for (std::size_t a = 0; a < s; ++a)
		{
			row[a * m + j] = 1;
			market_demand += inst.demand[members[a]][j];
		}
		lp.add_constraint(std::move(row), Relation::equal, market_demand);
	}
	for (std::size_t a = 0; a < s; ++a)
	{
		const auto& q = inst.capacity[members[a]];
		if (!q)
		{
			continue;
		}
		std::vector<Rational> row(s * m);
		for (std::size_t j = 0; j < m; ++j)
		{
			row[a * m + j] = 1;
		}
		lp.add_constraint(std::move(row), Relation::less_equal, *q);
	}
	LpResult r = solve_lp(lp);
	ensure(r.status == LpStatus::optimal,
	       std::string("coalition LP is ") + to_string(r.status) + " despite capacities covering own demand");
	CoalitionValue out;
	out.value = r.objective;
	out.plan.assign(inst.players(), std::vector<Rational>(m));
	for (std::size_t a = 0; a < s; ++a)
	{
		for (std::size_t j = 0; j < m; ++j)
		{
			out.plan[members[a]][j] = r.primal[a * m + j];
		}
	}
	return out;
}

} // namespace detail

/// Value of coalition S (instance player indices, instance demand units),
/// with an optimal production plan.
inline CoalitionValue value_general(const NormalizedInstance& inst, const Coalition& s,
                                    Evaluation evaluation = Evaluation::automatic)
{
	if (s.players() != inst.players())
	{
		throw input_error("coalition is over " + std::to_string(s.players()) + " players, instance has "
		                  + std::to_string(inst.players()));
	}
	if (s.empty())
	{
		throw input_error("coalition value requires a non-empty coalition");
	}
	std::vector<std::size_t> members = s.members();
	if (evaluation == Evaluation::closed_form && !inst.uncapacitated())
	{
		throw unsupported_error("closed-form coalition value needs unbounded capacities");
	}
	bool closed = evaluation == Evaluation::closed_form
	              || (evaluation == Evaluation::automatic && inst.uncapacitated());
	CoalitionValue out = closed ? detail::value_closed_form(inst, members) : detail::value_lp(inst, members);
	for (std::size_t i : members)
	{
		for (std::size_t j = 0; j < inst.markets(); ++j)
		{
			if (inst.unprofitable[i][j])
			{
				out.plan[i][j] = 0;
			}
		}
	}
	return out;
}

using ValueOracle = std::function<Rational(const Coalition&)>;

inline ValueOracle make_value_oracle(const NormalizedInstance& inst)
{
	return [inst](const Coalition& s) {
		return s.empty() ? Rational(0) : value_general(inst, s).value;
	};
}

/// Oracle in sorted, unit-demand coordinates of g.
inline ValueOracle make_value_oracle(const SingleMarketGame& g)
{
	return [g](const Coalition& s) { return value_single_market(g, s); };
}

enum class Method
{
	unspecified,
	nucleolus,
	shapley,
	sum_of_nucleoli,
	core_point
};

inline const char* to_string(Method method)
{
	switch (method)
	{
	case Method::unspecified: return "unspecified";
	case Method::nucleolus: return "nucleolus";
	case Method::shapley: return "shapley";
	case Method::sum_of_nucleoli: return "sum-of-nucleoli";
	case Method::core_point: return "core-point";
	}
	return "?";
}

/// Payoff vector with x(N) = v(N).
struct Allocation
{
	std::vector<Rational> payoff;
	Rational grand_value;
	Method method = Method::unspecified;
	/// Core membership when known: by construction or by an explicit check.
	std::optional<bool> in_core;

	Rational total() const
	{
		Rational sum;
		for (const Rational& x : payoff)
		{
			sum += x;
		}
		return sum;
	}

	bool efficient() const { return total() == grand_value; }
};

struct Excess
{
	Coalition coalition;
	Rational excess;
};

/// Coalition minimizing x(S) - v(S) over non-empty S (sorted positions),
/// by scanning the minimum member j: the best set with minimum j is j plus
/// every later i with x_i - alpha_j lambda_i < 0. O(n^2). Ties go to the
/// smallest j.
inline Excess min_excess(const SingleMarketGame& g, const std::vector<Rational>& x)
{
	const std::size_t n = g.size();
	if (x.size() != n)
	{
		throw input_error("payoff vector length does not match the game");
	}
	std::optional<Excess> best;
	Rational weight;
	for (std::size_t j = 0; j < n; ++j)
	{
		Coalition s(n);
		s.insert(j);
		Rational excess = x[j] - g.alpha(j) * g.lambda(j);
		for (std::size_t i = j + 1; i < n; ++i)
		{
			weight = x[i] - g.alpha(j) * g.lambda(i);
			if (weight < 0)
			{
				s.insert(i);
				excess += weight;
			}
		}
		if (!best || excess < best->excess)
		{
			best = Excess{std::move(s), excess};
		}
	}
	return *best;
}

struct CoreCheck
{
	bool in_core = true;
	/// Coalition of minimum excess (a maximally violated one when not in
	/// the core). Unset only for the one-player game.
	std::optional<Coalition> coalition;
	Rational excess;
};

namespace detail {

inline void check_efficiency(const Rational& total, const Rational& grand)
{
	if (total != grand)
	{
		throw input_error("allocation is not efficient: x(N) = " + to_string(total) + " but v(N) = "
		                  + to_string(grand));
	}
}

} // namespace detail

/// Core membership by enumerating all 2^n - 2 proper coalitions.
inline CoreCheck core_check(const ValueOracle& v, const std::vector<Rational>& x, std::size_t n)
{
	if (x.size() != n)
	{
		throw input_error("allocation has " + std::to_string(x.size()) + " entries, game has " + std::to_string(n)
		                  + " players");
	}
	check_enumerable(n);
	Rational total;
	for (const Rational& xi : x)
	{
		total += xi;
	}
	detail::check_efficiency(total, v(Coalition::grand(n)));

	CoreCheck out;
	// Gray-code walk: each step toggles one player in the running sum.
	const Coalition::Mask full = (Coalition::Mask{1} << n) - 1;
	Coalition::Mask best = 0;
	Rational partial;
	for (Coalition::Mask k = 1; k <= full; ++k)
	{
		Coalition::Mask s = k ^ (k >> 1);
		std::size_t flipped = static_cast<std::size_t>(std::countr_zero(k));
		if ((s >> flipped) & 1U)
		{
			partial += x[flipped];
		}
		else
		{
			partial -= x[flipped];
		}
		if (s == full)
		{
			continue;
		}
		Rational excess = partial - v(Coalition::from_mask(n, s));
		if (best == 0 || excess < out.excess || (excess == out.excess && s < best))
		{
			best = s;
			out.excess = excess;
		}
	}
	if (best != 0)
	{
		out.coalition = Coalition::from_mask(n, best);
	}
	out.in_core = !out.coalition || out.excess >= 0;
	return out;
}

/// Core membership of an uncapacitated single-market game through
/// min_excess; x and the returned coalition are in sorted positions.
inline CoreCheck core_check(const SingleMarketGame& g, const std::vector<Rational>& x)
{
	Rational total;
	for (const Rational& xi : x)
	{
		total += xi;
	}
	detail::check_efficiency(total, value_single_market(g, Coalition::grand(g.size())));
	Excess e = min_excess(g, x);
	CoreCheck out;
	out.in_core = e.excess >= 0;
	out.coalition = std::move(e.coalition);
	out.excess = e.excess;
	return out;
}

} // namespace coopshare

#endif // COOPSHARE_GAME_HPP
