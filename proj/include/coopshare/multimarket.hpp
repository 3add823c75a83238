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
 * \file coopshare/multimarket.hpp
 *
 * \brief Uncapacitated multi-market games as sums of single-market games.
 *
 * Without capacities v(S) = sum_j max_{i in S} alpha_ij * d_j(S), so the
 * game is the sum of one single-market game per market. Shapley values add
 * up across markets; nucleoli do not, but their sum is still a core
 * allocation.
 */

#ifndef COOPSHARE_MULTIMARKET_HPP
#define COOPSHARE_MULTIMARKET_HPP

#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/nucleolus.hpp>
#include <coopshare/rational.hpp>
#include <coopshare/shapley.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace coopshare {

struct MarketGame
{
	std::size_t market;
	SingleMarketGame game;
	Rational best_profit; // alpha*_j = max_i alpha_ij
};

struct MarketDecomposition
{
	std::size_t players = 0;
	/// Per-market demand in instance order, for every market (also the
	/// dropped zero-demand ones).
	Matrix demand;
	std::vector<Rational> best_profit;
	/// Markets with positive demand, in market order.
	std::vector<MarketGame> markets;
};

inline MarketDecomposition decompose(const NormalizedInstance& inst)
{
	if (!inst.uncapacitated())
	{
		throw unsupported_error("market decomposition needs unbounded capacities; "
		                        "use the exhaustive oracle methods for capacitated instances");
	}
	MarketDecomposition out;
	out.players = inst.players();
	out.demand = inst.demand;
	out.best_profit.resize(inst.markets());
	for (std::size_t j = 0; j < inst.markets(); ++j)
	{
		for (std::size_t i = 0; i < inst.players(); ++i)
		{
			if (inst.profit[i][j] > out.best_profit[j])
			{
				out.best_profit[j] = inst.profit[i][j];
			}
		}
		if (inst.market_demand(j) == 0)
		{
			continue;
		}
		out.markets.push_back(MarketGame{j, to_single_market(inst, j), out.best_profit[j]});
	}
	return out;
}

namespace detail {

inline Rational grand_value(const MarketDecomposition& dec)
{
	Rational total;
	for (const MarketGame& mg : dec.markets)
	{
		total += mg.game.alpha(0) * mg.game.scale();
	}
	return total;
}

template <typename PerMarket>
Allocation sum_over_markets(const MarketDecomposition& dec, Method method, PerMarket&& per_market)
{
	Allocation out;
	out.payoff.assign(dec.players, Rational(0));
	out.method = method;
	for (const MarketGame& mg : dec.markets)
	{
		Allocation part = per_market(mg.game);
		for (std::size_t i = 0; i < dec.players; ++i)
		{
			out.payoff[i] += part.payoff[i];
		}
	}
	out.grand_value = grand_value(dec);
	ensure(out.efficient(), std::string(to_string(method)) + " sum is not efficient");
	return out;
}

} // namespace detail

/// x_i = sum_j alpha*_j d_ij: every unit of demand is paid at the best
/// margin of its market.
inline Allocation core_point(const MarketDecomposition& dec)
{
	Allocation out;
	out.payoff.assign(dec.players, Rational(0));
	for (std::size_t i = 0; i < dec.players; ++i)
	{
		for (std::size_t j = 0; j < dec.best_profit.size(); ++j)
		{
			out.payoff[i] += dec.best_profit[j] * dec.demand[i][j];
		}
	}
	out.grand_value = detail::grand_value(dec);
	out.method = Method::core_point;
	out.in_core = true;
	detail::ensure(out.efficient(), "core point is not efficient");
	return out;
}

inline Allocation sum_of_nucleoli(const MarketDecomposition& dec)
{
	Allocation out = detail::sum_over_markets(dec, Method::sum_of_nucleoli, [](const SingleMarketGame& g) {
		return nucleolus_primal_dual(g).allocation;
	});
	out.in_core = true;
	return out;
}

inline Allocation shapley_multimarket(const MarketDecomposition& dec)
{
	return detail::sum_over_markets(dec, Method::shapley, [](const SingleMarketGame& g) {
		return shapley_single_market(g);
	});
}

} // namespace coopshare

#endif // COOPSHARE_MULTIMARKET_HPP
