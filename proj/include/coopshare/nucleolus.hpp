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
 * \file coopshare/nucleolus.hpp
 *
 * \brief Nucleolus of production-distribution games.
 *
 * Three routes, all exact:
 *
 *  - nucleolus_primal_dual(): combinatorial primal-dual algorithm for the
 *    uncapacitated single-market game. Each Maschler level is solved from
 *    the previous optimum by at most one step along the improving
 *    direction; the fixed family is always "subsets of F and their
 *    complements" for a set F not containing the strongest player, and F
 *    grows every level. O(n^4) overall.
 *  - nucleolus_separation(): revised Maschler scheme for the same games
 *    where every level LP is solved by cutting planes over a polynomial
 *    separation routine.
 *  - nucleolus_bruteforce(): textbook Maschler scheme with every coalition
 *    constraint written out. Works for any value oracle, n <= 12.
 *
 * Single-market routines work in the sorted, unit-demand coordinates of
 * SingleMarketGame (position 0 is the player with the largest unit
 * profit); returned allocations are mapped back to instance order and units.
 */

#ifndef COOPSHARE_NUCLEOLUS_HPP
#define COOPSHARE_NUCLEOLUS_HPP

#include <coopshare/coalition.hpp>
#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/lp.hpp>
#include <coopshare/rational.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coopshare {

inline constexpr std::size_t max_bruteforce_nucleolus_players = 12;

/// Family of coalitions whose payoff is fixed: every S with S a subset of F
/// or S a superset of N \ F. F never contains player 0.
class FixedFamily
{
public:
	explicit FixedFamily(std::size_t players)
	: fixed_(players)
	{
	}

	explicit FixedFamily(Coalition fixed)
	: fixed_(std::move(fixed))
	{
		if (fixed_.contains(0))
		{
			throw input_error("fixed family base set must not contain the strongest player");
		}
	}

	std::size_t players() const { return fixed_.players(); }
	const Coalition& base() const { return fixed_; }
	bool complete() const { return fixed_.size() + 1 == fixed_.players(); }

	bool contains(const Coalition& s) const
	{
		if (s.is_subset_of(fixed_))
		{
			return true;
		}
		for (std::size_t i = 0; i < players(); ++i)
		{
			if (!fixed_.contains(i) && !s.contains(i))
			{
				return false;
			}
		}
		return true;
	}

	/// F <- F u S. Returns the number of new members.
	std::size_t absorb(const Coalition& s)
	{
		if (s.contains(0))
		{
			throw internal_error("cannot fix a coalition containing the strongest player");
		}
		std::size_t before = fixed_.size();
		fixed_ = fixed_ | s;
		return fixed_.size() - before;
	}

	friend bool operator==(const FixedFamily&, const FixedFamily&) = default;

private:
	Coalition fixed_;
};

/// Direction (x~, eps~ = 1) that raises every unfixed excess not involving
/// player 0 while keeping all fixed coalitions constant.
struct ImprovingDirection
{
	std::vector<Rational> payoff;
	Rational epsilon{1};

	static ImprovingDirection build(const FixedFamily& family)
	{
		const std::size_t n = family.players();
		ImprovingDirection d;
		d.payoff.assign(n, Rational(0));
		std::size_t fixed = family.base().size();
		d.payoff[0] = Rational(static_cast<long>(n - 1 - fixed));
		for (std::size_t i = 1; i < n; ++i)
		{
			if (!family.base().contains(i))
			{
				d.payoff[i] = -1;
			}
		}
		Rational sum;
		for (std::size_t i = 0; i < n; ++i)
		{
			sum += d.payoff[i];
			detail::ensure(!family.base().contains(i) || d.payoff[i] == 0, "direction moves a fixed player");
		}
		detail::ensure(sum == 0, "improving direction changes x(N)");
		return d;
	}
};

/// Current primal-dual state in sorted, unit-demand coordinates.
struct SchemeState
{
	std::vector<Rational> payoff;
	Rational epsilon;
	FixedFamily family;
	std::size_t iteration = 0;
};

struct Step
{
	Rational length;
	Coalition coalition; // sorted positions, never contains player 0
};

/// Largest feasible move along the improving direction and the coalition
/// that becomes tight. For every minimum member i != 0 and every count
/// t = |S \ F|, the best S takes i, the fixed members after i with negative
/// weight w_j = x_j - alpha_i lambda_j, and the t (or t - 1 when i is free)
/// lightest free members after i, ranked by (w_j, j).
inline Step step_size(const SingleMarketGame& g, const std::vector<Rational>& x, const Rational& epsilon,
                      const FixedFamily& family)
{
	const std::size_t n = g.size();
	if (x.size() != n || family.players() != n)
	{
		throw input_error("step_size: state does not match the game");
	}
	const Coalition& fixed = family.base();
	const std::size_t budget = n - 1 - fixed.size();

	std::optional<Step> best;
	Rational candidate;
	std::vector<std::pair<Rational, std::size_t>> free_weights;
	for (std::size_t i = 1; i < n; ++i)
	{
		const bool i_fixed = fixed.contains(i);
		Rational base = x[i] - g.alpha(i) * g.lambda(i);
		free_weights.clear();
		for (std::size_t j = i + 1; j < n; ++j)
		{
			Rational w = x[j] - g.alpha(i) * g.lambda(j);
			if (fixed.contains(j))
			{
				if (w < 0)
				{
					base += w;
				}
			}
			else
			{
				free_weights.emplace_back(std::move(w), j);
			}
		}
		std::sort(free_weights.begin(), free_weights.end(), [](const auto& a, const auto& b) {
			return a.first < b.first || (a.first == b.first && a.second < b.second);
		});

		Rational weight = base;
		std::size_t taken = 0;
		for (std::size_t t = 1; t <= budget; ++t)
		{
			std::size_t need = i_fixed ? t : t - 1;
			if (need > free_weights.size())
			{
				break;
			}
			while (taken < need)
			{
				weight += free_weights[taken].first;
				++taken;
			}
			candidate = (weight - epsilon) / Rational(static_cast<long>(1 + t));
			if (!best || candidate < best->length)
			{
				Coalition s(n);
				s.insert(i);
				for (std::size_t j = i + 1; j < n; ++j)
				{
					if (fixed.contains(j) && x[j] - g.alpha(i) * g.lambda(j) < 0)
					{
						s.insert(j);
					}
				}
				for (std::size_t k = 0; k < need; ++k)
				{
					s.insert(free_weights[k].second);
				}
				best = Step{candidate, std::move(s)};
			}
		}
	}
	detail::ensure(best.has_value(), "step_size: no unfixed coalition left");
	detail::ensure(best->length >= 0, "step_size: current point is infeasible (negative step)");
	return *best;
}

struct PrimalDualIteration
{
	Rational step;
	Coalition tight;                             // sorted positions
	std::optional<ImprovingDirection> direction; // unset for zero steps
	SchemeState state;                           // after the update and the fixing
};

struct PrimalDualResult
{
	Allocation allocation;
	std::vector<PrimalDualIteration> trace;
	std::vector<Rational> sorted_payoff; // unit-demand, sorted positions
	Rational epsilon;                    // final level, unit-demand
};

namespace detail {

inline Rational coalition_sum(const std::vector<Rational>& x, const Coalition& s)
{
	Rational sum;
	for (std::size_t k : s.members())
	{
		sum += x[k];
	}
	return sum;
}

inline void check_complements_tight(const SingleMarketGame& g, const std::vector<Rational>& x, const Rational& epsilon,
                               const FixedFamily& family)
{
	const std::size_t n = g.size();
	Rational total;
	for (const Rational& xi : x)
	{
		total += xi;
	}
	for (std::size_t i = 1; i < n; ++i)
	{
		if (family.base().contains(i))
		{
			continue;
		}
		// v(N \ i) = alpha_0 (1 - lambda_i) since player 0 stays.
		Rational lhs = total - x[i];
		Rational rhs = g.alpha(0) * (Rational(1) - g.lambda(i)) + epsilon;
		ensure(lhs == rhs, "x(N \\ " + std::to_string(i + 1) + ") is not tight at the current level");
	}
}

} // namespace detail

inline PrimalDualResult nucleolus_primal_dual(const SingleMarketGame& g)
{
	const std::size_t n = g.size();
	PrimalDualResult out;
	std::vector<Rational> x(n);
	for (std::size_t j = 0; j < n; ++j)
	{
		x[j] = g.lambda(j) * g.alpha(0);
	}
	Rational epsilon(0);
	FixedFamily family(n);
	detail::check_complements_tight(g, x, epsilon, family);

	std::size_t iteration = 0;
	while (n > 1 && !family.complete())
	{
		++iteration;
		detail::ensure(iteration <= n - 1, "primal-dual exceeded n - 1 levels");
		Step step = step_size(g, x, epsilon, family);
		std::optional<ImprovingDirection> direction;
		if (step.length > 0)
		{
			ImprovingDirection d = ImprovingDirection::build(family);
			for (std::size_t k = 0; k < n; ++k)
			{
				if (d.payoff[k] != 0)
				{
					x[k] += step.length * d.payoff[k];
				}
			}
			epsilon += step.length * d.epsilon;
			direction = std::move(d);
		}
		detail::check_complements_tight(g, x, epsilon, family);
		detail::ensure(detail::coalition_sum(x, step.coalition) - value_single_market(g, step.coalition) == epsilon,
		               "step coalition is not tight after the update");
		std::size_t grown = family.absorb(step.coalition);
		detail::ensure(grown > 0, "fixed set did not grow");
		out.trace.push_back(
			PrimalDualIteration{step.length, step.coalition, std::move(direction), SchemeState{x, epsilon, family, iteration}});
	}

	out.sorted_payoff = x;
	out.epsilon = epsilon;
	out.allocation.payoff = g.to_original(x);
	out.allocation.grand_value = g.alpha(0) * g.scale();
	out.allocation.method = Method::nucleolus;
	out.allocation.in_core = true;
	detail::ensure(out.allocation.efficient(), "primal-dual result is not efficient");
	return out;
}

struct FixedSet
{
	Coalition coalition;
	Rational value;
};

struct Separation
{
	bool feasible = true;
	std::optional<Coalition> violated; // sorted positions
};

namespace detail {

/// Separation over {x(S) >= v(S) + eps for all S outside span}. Sets are
/// scanned by minimum member i; for each, the weights a are the
/// x_k - alpha_i lambda_k of later players in ascending order, the most
/// violated set takes all non-positive ones, and only its one-element
/// neighbours along the sorted order can separate when it is spanned.
inline Separation separate(const SingleMarketGame& g, const std::vector<Rational>& x, const Rational& epsilon,
                           const SpanBasis& span)
{
	const std::size_t n = g.size();
	std::vector<std::pair<Rational, std::size_t>> a;
	std::vector<bool> indicator(n);
	for (std::size_t i = 0; i < n; ++i)
	{
		a.clear();
		for (std::size_t k = i + 1; k < n; ++k)
		{
			a.emplace_back(x[k] - g.alpha(i) * g.lambda(k), k);
		}
		std::sort(a.begin(), a.end(), [](const auto& l, const auto& r) {
			return l.first < r.first || (l.first == r.first && l.second < r.second);
		});
		const std::size_t p = a.size();
		const Rational bound = epsilon - (x[i] - g.alpha(i) * g.lambda(i));

		std::size_t jbar = 0;
		Rational base;
		while (jbar < p && a[jbar].first <= 0)
		{
			base += a[jbar].first;
			++jbar;
		}
		if (base >= bound)
		{
			continue;
		}

		// Sorted positions are 1-based below: position l is a[l - 1].
		auto as_coalition = [&](std::size_t drop, std::size_t add) {
			Coalition s(n);
			s.insert(i);
			for (std::size_t l = 1; l <= jbar; ++l)
			{
				if (l != drop)
				{
					s.insert(a[l - 1].second);
				}
			}
			if (add != 0)
			{
				s.insert(a[add - 1].second);
			}
			return s;
		};
		auto spanned = [&](const Coalition& s) {
			std::fill(indicator.begin(), indicator.end(), false);
			for (std::size_t k : s.members())
			{
				indicator[k] = true;
			}
			return span.contains(indicator);
		};

		Coalition top = as_coalition(0, 0);
		if (!spanned(top))
		{
			return Separation{false, std::move(top)};
		}

		std::size_t low = jbar;
		while (low >= 1)
		{
			Coalition s = as_coalition(low, 0);
			if (!(spanned(s) && base - a[low - 1].first < bound))
			{
				if (!spanned(s) && base - a[low - 1].first < bound)
				{
					return Separation{false, std::move(s)};
				}
				break;
			}
			--low;
		}

		std::size_t high = jbar + 1;
		while (high <= p)
		{
			Coalition s = as_coalition(0, high);
			if (!(spanned(s) && base + a[high - 1].first < bound))
			{
				if (!spanned(s) && base + a[high - 1].first < bound)
				{
					return Separation{false, std::move(s)};
				}
				break;
			}
			++high;
		}
	}
	return Separation{};
}

} // namespace detail

/// Looks for S with x(S) < v(S) + eps whose characteristic vector is not in
/// the span of the fixed sets. x satisfies every fixed equality.
inline Separation separate(const SingleMarketGame& g, const std::vector<Rational>& x, const Rational& epsilon,
                           const std::vector<FixedSet>& fixed)
{
	const std::size_t n = g.size();
	if (x.size() != n)
	{
		throw input_error("separate: payoff length does not match the game");
	}
	SpanBasis span(n);
	if (detail::coalition_sum(x, Coalition::grand(n)) != value_single_market(g, Coalition::grand(n)))
	{
		throw input_error("separate: x(N) differs from v(N)");
	}
	span.insert(Coalition::grand(n).indicator());
	for (const FixedSet& f : fixed)
	{
		if (detail::coalition_sum(x, f.coalition) != f.value)
		{
			throw input_error("separate: x violates the fixed equality on " + f.coalition.to_string());
		}
		span.insert(f.coalition.indicator());
	}
	return detail::separate(g, x, epsilon, span);
}

/// One level of a Maschler scheme: optimal excess and the coalitions fixed
/// at it.
struct MaschlerLevel
{
	Rational epsilon;
	std::vector<FixedSet> fixed;
	std::size_t lp_solves = 0;
};

struct MaschlerResult
{
	Allocation allocation;
	std::vector<MaschlerLevel> levels;
};

/// Revised Maschler scheme with cutting planes: each level LP starts from
/// the current cut pool, separation adds violated coalitions until none is
/// left, then every cut with a non-zero dual is fixed at equality.
inline MaschlerResult nucleolus_separation(const SingleMarketGame& g)
{
	const std::size_t n = g.size();
	MaschlerResult out;
	out.allocation.grand_value = g.alpha(0) * g.scale();
	out.allocation.method = Method::nucleolus;
	out.allocation.in_core = true;
	if (n == 1)
	{
		out.allocation.payoff = g.to_original({g.alpha(0)});
		return out;
	}

	const Coalition grand = Coalition::grand(n);
	SpanBasis span(n);
	span.insert(grand.indicator());
	std::vector<FixedSet> fixed{FixedSet{grand, value_single_market(g, grand)}};
	std::vector<Coalition> cuts;
	std::vector<Rational> x;

	auto in_span = [&](const Coalition& s) { return span.contains(s.indicator()); };
	auto refresh_cuts = [&]() {
		std::vector<Coalition> kept;
		for (Coalition& c : cuts)
		{
			if (!in_span(c))
			{
				kept.push_back(std::move(c));
			}
		}
		cuts = std::move(kept);
		// Free singletons keep the level LP bounded.
		for (std::size_t i = 0; i < n; ++i)
		{
			Coalition single(n, {i});
			if (!in_span(single) && std::find(cuts.begin(), cuts.end(), single) == cuts.end())
			{
				cuts.push_back(std::move(single));
			}
		}
	};
	refresh_cuts();

	for (std::size_t level = 1; !span.full(); ++level)
	{
		detail::ensure(level <= n, "separation scheme exceeded n levels");
		MaschlerLevel record;
		LpResult r;
		for (;;)
		{
			LinearProgram lp(n + 1, Sense::maximize);
			for (std::size_t k = 0; k <= n; ++k)
			{
				lp.set_bound(k, Bound::free);
			}
			lp.set_objective(n, Rational(1));
			for (const FixedSet& f : fixed)
			{
				std::vector<Rational> row(n + 1);
				for (std::size_t k : f.coalition.members())
				{
					row[k] = 1;
				}
				lp.add_constraint(std::move(row), Relation::equal, f.value);
			}
			for (const Coalition& c : cuts)
			{
				std::vector<Rational> row(n + 1);
				for (std::size_t k : c.members())
				{
					row[k] = 1;
				}
				row[n] = -1;
				lp.add_constraint(std::move(row), Relation::greater_equal, value_single_market(g, c));
			}
			r = solve_lp(lp);
			++record.lp_solves;
			detail::ensure(r.status == LpStatus::optimal,
			               std::string("relaxed level LP is ") + to_string(r.status));
			x.assign(r.primal.begin(), r.primal.begin() + static_cast<std::ptrdiff_t>(n));
			Separation sep = detail::separate(g, x, r.objective, span);
			if (sep.feasible)
			{
				break;
			}
			detail::ensure(std::find(cuts.begin(), cuts.end(), *sep.violated) == cuts.end(),
			               "separation returned a coalition already in the cut pool");
			cuts.push_back(std::move(*sep.violated));
		}

		record.epsilon = r.objective;
		const std::size_t offset = fixed.size();
		for (std::size_t c = 0; c < cuts.size(); ++c)
		{
			if (r.duals[offset + c] == 0)
			{
				continue;
			}
			if (span.insert(cuts[c].indicator()))
			{
				FixedSet f{cuts[c], value_single_market(g, cuts[c]) + r.objective};
				record.fixed.push_back(f);
				fixed.push_back(std::move(f));
			}
		}
		detail::ensure(!record.fixed.empty(), "no positive-dual coalition to fix at level " + std::to_string(level));
		out.levels.push_back(std::move(record));
		refresh_cuts();
	}

	// The face is a single point and the last LP optimum lies on it.
	out.allocation.payoff = g.to_original(x);
	detail::ensure(out.allocation.efficient(), "separation result is not efficient");
	return out;
}

/// Maschler scheme over every proper coalition, for any game given by its
/// value oracle. Each level solves the leastcore-style LP, then finds the
/// constraints tight on the whole optimal face (implicit equalities) by
/// repeatedly maximizing the summed payoff of the still-undecided tight
/// coalitions over the face: a coalition left slack is dropped, and once
/// the maximum equals the tight value every remaining one is an implicit
/// equality. x(S) is constant on the face exactly when S lies in the span of
/// the fixed and implicit-equality coalitions.
inline MaschlerResult nucleolus_bruteforce(const ValueOracle& v, std::size_t n)
{
	if (n == 0)
	{
		throw input_error("game without players");
	}
	check_enumerable(n, max_bruteforce_nucleolus_players);
	using Mask = Coalition::Mask;
	const Mask full = (Mask{1} << n) - 1;

	std::vector<Rational> value(full + 1);
	for (Mask s = 1; s <= full; ++s)
	{
		value[s] = v(Coalition::from_mask(n, s));
	}

	MaschlerResult out;
	out.allocation.grand_value = value[full];
	out.allocation.method = Method::nucleolus;
	if (n == 1)
	{
		out.allocation.payoff = {value[full]};
		return out;
	}

	auto indicator = [n](Mask s) {
		std::vector<bool> ind(n);
		for (std::size_t k = 0; k < n; ++k)
		{
			ind[k] = ((s >> k) & 1U) != 0;
		}
		return ind;
	};
	auto row_of = [n](Mask s, std::size_t width) {
		std::vector<Rational> row(width);
		for (std::size_t k = 0; k < n; ++k)
		{
			if ((s >> k) & 1U)
			{
				row[k] = 1;
			}
		}
		return row;
	};

	SpanBasis span(n);
	span.insert(indicator(full));
	std::vector<std::pair<Mask, Rational>> equalities{{full, value[full]}};
	std::vector<Rational> x;

	for (std::size_t level = 1; !span.full(); ++level)
	{
		detail::ensure(level <= n, "Maschler scheme exceeded n levels");
		std::vector<Mask> free;
		for (Mask s = 1; s < full; ++s)
		{
			if (!span.contains(indicator(s)))
			{
				free.push_back(s);
			}
		}

		MaschlerLevel record;
		LinearProgram lp(n + 1, Sense::maximize);
		for (std::size_t k = 0; k <= n; ++k)
		{
			lp.set_bound(k, Bound::free);
		}
		lp.set_objective(n, Rational(1));
		for (const auto& [s, c] : equalities)
		{
			lp.add_constraint(row_of(s, n + 1), Relation::equal, c);
		}
		for (Mask s : free)
		{
			std::vector<Rational> row = row_of(s, n + 1);
			row[n] = -1;
			lp.add_constraint(std::move(row), Relation::greater_equal, value[s]);
		}
		LpResult r = solve_lp(lp);
		++record.lp_solves;
		detail::ensure(r.status == LpStatus::optimal, std::string("level LP is ") + to_string(r.status));
		const Rational epsilon = r.objective;
		x.assign(r.primal.begin(), r.primal.begin() + static_cast<std::ptrdiff_t>(n));

		auto payoff_of = [n](const std::vector<Rational>& point, Mask s) {
			Rational sum;
			for (std::size_t k = 0; k < n; ++k)
			{
				if ((s >> k) & 1U)
				{
					sum += point[k];
				}
			}
			return sum;
		};

		std::vector<Mask> tight;
		for (Mask s : free)
		{
			if (payoff_of(x, s) - value[s] == epsilon)
			{
				tight.push_back(s);
			}
		}

		for (;;)
		{
			LinearProgram face(n, Sense::maximize);
			for (std::size_t k = 0; k < n; ++k)
			{
				face.set_bound(k, Bound::free);
			}
			std::vector<Rational> objective(n);
			Rational target;
			for (Mask s : tight)
			{
				for (std::size_t k = 0; k < n; ++k)
				{
					if ((s >> k) & 1U)
					{
						objective[k] += 1;
					}
				}
				target += value[s] + epsilon;
			}
			face.set_objective(std::move(objective));
			for (const auto& [s, c] : equalities)
			{
				face.add_constraint(row_of(s, n), Relation::equal, c);
			}
			for (Mask s : free)
			{
				face.add_constraint(row_of(s, n), Relation::greater_equal, value[s] + epsilon);
			}
			LpResult fr = solve_lp(face);
			++record.lp_solves;
			detail::ensure(fr.status == LpStatus::optimal, std::string("face LP is ") + to_string(fr.status));
			if (fr.objective == target)
			{
				break;
			}
			std::vector<Mask> still;
			for (Mask s : tight)
			{
				if (payoff_of(fr.primal, s) == value[s] + epsilon)
				{
					still.push_back(s);
				}
			}
			detail::ensure(still.size() < tight.size(), "implicit-equality search made no progress");
			tight = std::move(still);
		}

		for (Mask s : tight)
		{
			if (span.insert(indicator(s)))
			{
				Rational c = value[s] + epsilon;
				equalities.emplace_back(s, c);
				record.fixed.push_back(FixedSet{Coalition::from_mask(n, s), c});
			}
		}
		detail::ensure(!record.fixed.empty(), "Maschler level fixed nothing");
		record.epsilon = epsilon;
		out.levels.push_back(std::move(record));
	}

	out.allocation.payoff = x;
	detail::ensure(out.allocation.efficient(), "Maschler result is not efficient");
	return out;
}

} // namespace coopshare

#endif // COOPSHARE_NUCLEOLUS_HPP
