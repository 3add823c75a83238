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

// Shared generators and independent reference computations for the tests.

#ifndef COOPSHARE_TESTS_SUPPORT_HPP
#define COOPSHARE_TESTS_SUPPORT_HPP

#include <coopshare/coopshare.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace coopshare::reference {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi)
{
	return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, long max_num, long max_den)
{
	return make_rational(uniform(rng, 0, max_num), uniform(rng, 1, max_den));
}

/// Sorted single-market game. Unit profits come from a small pool so ties
/// are common; a few demand shares are zero.
inline SingleMarketGame random_single_market(Rng& rng, std::size_t n)
{
	std::vector<Rational> alpha(n);
	for (auto& a : alpha)
	{
		a = make_rational(uniform(rng, 0, 8), uniform(rng, 1, 3));
	}
	std::sort(alpha.begin(), alpha.end(), [](const Rational& l, const Rational& r) { return l > r; });
	std::vector<Rational> weight(n);
	Rational total;
	while (total == 0)
	{
		total = 0;
		for (auto& w : weight)
		{
			w = uniform(rng, 0, 9) == 0 ? Rational(0) : make_rational(uniform(rng, 1, 7), uniform(rng, 1, 4));
			total += w;
		}
	}
	for (auto& w : weight)
	{
		w /= total;
	}
	return SingleMarketGame::from_sorted(std::move(alpha), std::move(weight));
}

inline Instance random_instance(Rng& rng, std::size_t n, std::size_t m, bool capacitated, bool integral = false)
{
	Instance inst;
	for (std::size_t i = 0; i < n; ++i)
	{
		inst.player_names.push_back("p" + std::to_string(i + 1));
	}
	for (std::size_t j = 0; j < m; ++j)
	{
		inst.market_names.push_back("m" + std::to_string(j + 1));
		inst.price.push_back(make_rational(uniform(rng, 2, 12), integral ? 1 : uniform(rng, 1, 2)));
	}
	inst.cost.assign(n, std::vector<Rational>(m));
	inst.demand.assign(n, std::vector<Rational>(m));
	inst.capacity.assign(n, std::nullopt);
	for (std::size_t i = 0; i < n; ++i)
	{
		Rational own;
		for (std::size_t j = 0; j < m; ++j)
		{
			inst.cost[i][j] = make_rational(uniform(rng, 0, 12), integral ? 1 : uniform(rng, 1, 3));
			inst.demand[i][j] = uniform(rng, 0, 3) == 0 ? Rational(0)
			                                            : make_rational(uniform(rng, 1, 6), integral ? 1 : uniform(rng, 1, 3));
			own += inst.demand[i][j];
		}
		if (capacitated && uniform(rng, 0, 3) != 0)
		{
			Rational extra = integral ? Rational(uniform(rng, 0, 8)) : random_rational(rng, 8, 3);
			Rational q = own + extra;
			inst.capacity[i] = q;
		}
	}
	return inst;
}

/// v(S) straight from the definition: the most profitable member serves
/// all demand of S. S holds indices into alpha/lambda in any order.
inline Rational reference_value(const std::vector<Rational>& alpha, const std::vector<Rational>& lambda,
                                const std::vector<std::size_t>& members)
{
	if (members.empty())
	{
		return Rational(0);
	}
	Rational best = alpha[members[0]];
	Rational share;
	for (std::size_t i : members)
	{
		best = std::max(best, alpha[i]);
		share += lambda[i];
	}
	return best * share;
}

inline std::vector<std::size_t> mask_members(std::uint64_t mask, std::size_t n)
{
	std::vector<std::size_t> out;
	for (std::size_t k = 0; k < n; ++k)
	{
		if ((mask >> k) & 1U)
		{
			out.push_back(k);
		}
	}
	return out;
}

inline std::vector<Rational> scaled(const std::vector<Rational>& x, const Rational& s)
{
	std::vector<Rational> out;
	for (const Rational& v : x)
	{
		out.push_back(v * s);
	}
	return out;
}

/// Shapley value by averaging marginal contributions over all n! orders.
inline std::vector<Rational> shapley_by_permutations(const ValueOracle& v, std::size_t n)
{
	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::vector<Rational> out(n);
	Integer count = 0;
	do
	{
		Coalition s(n);
		Rational before(0);
		for (std::size_t i : order)
		{
			s.insert(i);
			Rational after = v(s);
			out[i] += after - before;
			before = after;
		}
		count += 1;
	} while (std::next_permutation(order.begin(), order.end()));
	for (auto& x : out)
	{
		x /= Rational(count);
	}
	return out;
}

/// Balancedness of a family of coalitions: some strictly positive weights
/// w with sum_S w_S 1_S = 1_N.
inline bool balanced(const std::vector<std::uint64_t>& family, std::size_t n)
{
	if (family.empty())
	{
		return false;
	}
	const std::size_t k = family.size();
	// max t subject to sum w_S 1_S = 1_N, w_S >= t, t <= 1.
	LinearProgram lp(k + 1, Sense::maximize);
	lp.set_bound(k, Bound::free);
	lp.set_objective(k, Rational(1));
	for (std::size_t p = 0; p < n; ++p)
	{
		std::vector<Rational> row(k + 1);
		for (std::size_t c = 0; c < k; ++c)
		{
			if ((family[c] >> p) & 1U)
			{
				row[c] = 1;
			}
		}
		lp.add_constraint(std::move(row), Relation::equal, Rational(1));
	}
	for (std::size_t c = 0; c < k; ++c)
	{
		std::vector<Rational> row(k + 1);
		row[c] = 1;
		row[k] = -1;
		lp.add_constraint(std::move(row), Relation::greater_equal, Rational(0));
	}
	std::vector<Rational> cap(k + 1);
	cap[k] = 1;
	lp.add_constraint(std::move(cap), Relation::less_equal, Rational(1));
	LpResult r = solve_lp(lp);
	return r.status == LpStatus::optimal && r.objective > 0;
}

/// Kohlberg's characterization of the prenucleolus: x is efficient and for
/// every level t the coalitions with excess v(S) - x(S) >= t form a
/// balanced family whenever non-empty. For games with a non-empty core it
/// pins down the nucleolus.
inline bool kohlberg_nucleolus(const ValueOracle& v, const std::vector<Rational>& x)
{
	const std::size_t n = x.size();
	const std::uint64_t full = (std::uint64_t{1} << n) - 1;
	Rational total;
	for (const auto& xi : x)
	{
		total += xi;
	}
	if (total != v(Coalition::grand(n)))
	{
		return false;
	}
	if (n == 1)
	{
		return true;
	}
	std::vector<std::pair<Rational, std::uint64_t>> excess;
	for (std::uint64_t s = 1; s < full; ++s)
	{
		Rational e = v(Coalition::from_mask(n, s));
		for (std::size_t k = 0; k < n; ++k)
		{
			if ((s >> k) & 1U)
			{
				e -= x[k];
			}
		}
		excess.emplace_back(e, s);
	}
	std::sort(excess.begin(), excess.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
	std::vector<std::uint64_t> family;
	for (std::size_t k = 0; k < excess.size(); ++k)
	{
		family.push_back(excess[k].second);
		if (k + 1 == excess.size() || excess[k + 1].first != excess[k].first)
		{
			if (!balanced(family, n))
			{
				return false;
			}
		}
	}
	return true;
}

/// Unsorted copy of a sorted game: players shuffled, demands scaled.
inline Instance instance_of(const SingleMarketGame& g, Rng& rng, const Rational& price, const Rational& total)
{
	const std::size_t n = g.size();
	std::vector<std::size_t> where(n);
	std::iota(where.begin(), where.end(), std::size_t{0});
	std::shuffle(where.begin(), where.end(), rng);
	Instance inst;
	inst.market_names = {"m"};
	inst.price = {price};
	inst.cost.assign(n, std::vector<Rational>(1));
	inst.demand.assign(n, std::vector<Rational>(1));
	inst.capacity.assign(n, std::nullopt);
	for (std::size_t i = 0; i < n; ++i)
	{
		inst.player_names.push_back("p" + std::to_string(i + 1));
	}
	for (std::size_t k = 0; k < n; ++k)
	{
		inst.cost[where[k]][0] = price - g.alpha(k);
		inst.demand[where[k]][0] = g.lambda(k) * total;
	}
	return inst;
}

} // namespace coopshare::reference

namespace ref = coopshare::reference;

#endif // COOPSHARE_TESTS_SUPPORT_HPP
