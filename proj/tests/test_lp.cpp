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

#include "support.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <optional>

using namespace coopshare;
using ref::Rng;
using ref::uniform;

namespace {

Rational q(long num, long den = 1)
{
	return make_rational(num, den);
}

TEST(Rational, ParsesIntegersAndFractions)
{
	EXPECT_EQ(parse_rational("7"), q(7));
	EXPECT_EQ(parse_rational("-3/6"), q(-1, 2));
	EXPECT_EQ(parse_rational("+4/2"), q(2));
	EXPECT_THROW(parse_rational("1.5"), input_error);
	EXPECT_THROW(parse_rational("1e3"), input_error);
	EXPECT_THROW(parse_rational("1/0"), input_error);
	EXPECT_THROW(parse_rational(""), input_error);
	EXPECT_THROW(parse_rational("2/"), input_error);
	EXPECT_THROW(make_rational(1, 0), input_error);
}

TEST(Rational, FormatsExactAndDecimal)
{
	EXPECT_EQ(to_string(q(10, 3)), "10/3");
	EXPECT_EQ(to_string(q(-4, 2)), "-2");
	EXPECT_EQ(to_decimal(q(2, 3), 6), "0.666667");
	EXPECT_EQ(to_decimal(q(-1, 8), 2), "-0.13");
	EXPECT_EQ(to_decimal(q(-1, 1000), 2), "0.00");
	EXPECT_EQ(to_decimal(q(5), 0), "5");
	EXPECT_TRUE(is_integer(q(6, 3)));
	EXPECT_FALSE(is_integer(q(1, 3)));
}

TEST(LinearProgram, SingleBoundedVariable)
{
	LinearProgram lp(1);
	lp.set_objective(0, q(1));
	lp.add_constraint({q(1)}, Relation::less_equal, q(3));
	LpResult r = solve_lp(lp);
	ASSERT_EQ(r.status, LpStatus::optimal);
	EXPECT_EQ(r.objective, q(3));
	EXPECT_EQ(r.primal[0], q(3));
	EXPECT_EQ(r.duals[0], q(1));
}

TEST(LinearProgram, SymmetricLeastCore)
{
	// max e s.t. x1 - e >= 0, x2 - e >= 0, x1 + x2 = 1, all free.
	LinearProgram lp(3);
	for (std::size_t k = 0; k < 3; ++k)
	{
		lp.set_bound(k, Bound::free);
	}
	lp.set_objective(2, q(1));
	lp.add_constraint({q(1), q(0), q(-1)}, Relation::greater_equal, q(0));
	lp.add_constraint({q(0), q(1), q(-1)}, Relation::greater_equal, q(0));
	lp.add_constraint({q(1), q(1), q(0)}, Relation::equal, q(1));
	LpResult r = solve_lp(lp);
	ASSERT_EQ(r.status, LpStatus::optimal);
	EXPECT_EQ(r.objective, q(1, 2));
	EXPECT_EQ(r.primal[0], q(1, 2));
	EXPECT_EQ(r.primal[1], q(1, 2));
}

TEST(LinearProgram, InfeasibleAndUnbounded)
{
	LinearProgram infeasible(1);
	infeasible.add_constraint({q(1)}, Relation::less_equal, q(-1));
	EXPECT_EQ(solve_lp(infeasible).status, LpStatus::infeasible);

	LinearProgram unbounded(2);
	unbounded.set_objective({q(1), q(1)});
	unbounded.add_constraint({q(1), q(-1)}, Relation::less_equal, q(1));
	EXPECT_EQ(solve_lp(unbounded).status, LpStatus::unbounded);

	// More rows than columns takes the dual route.
	LinearProgram tall(1);
	tall.set_objective(0, q(1));
	tall.add_constraint({q(1)}, Relation::greater_equal, q(1));
	tall.add_constraint({q(1)}, Relation::greater_equal, q(2));
	EXPECT_EQ(solve_lp(tall).status, LpStatus::unbounded);
	tall.add_constraint({q(1)}, Relation::less_equal, q(0));
	EXPECT_EQ(solve_lp(tall).status, LpStatus::infeasible);
}

TEST(LinearProgram, RejectsRowsOfWrongWidth)
{
	LinearProgram lp(2);
	EXPECT_THROW(lp.add_constraint({q(1)}, Relation::equal, q(0)), input_error);
	EXPECT_THROW(lp.set_objective(5, q(1)), input_error);
}

// Reference optimum by vertex enumeration: every choice of num_variables
// tight rows among constraints and sign bounds, solved by elimination.
std::optional<Rational> vertex_optimum(const LinearProgram& lp)
{
	const std::size_t nv = lp.num_variables();
	std::vector<std::vector<Rational>> rows;
	std::vector<Rational> rhs;
	for (const Constraint& c : lp.constraints())
	{
		rows.push_back(c.coefficients);
		rhs.push_back(c.rhs);
	}
	for (std::size_t k = 0; k < nv; ++k)
	{
		std::vector<Rational> unit(nv);
		unit[k] = 1;
		rows.push_back(unit);
		rhs.push_back(0);
	}
	auto feasible = [&](const std::vector<Rational>& x) {
		for (const Constraint& c : lp.constraints())
		{
			Rational lhs;
			for (std::size_t k = 0; k < nv; ++k)
			{
				lhs += c.coefficients[k] * x[k];
			}
			if ((c.relation == Relation::less_equal && lhs > c.rhs) || (c.relation == Relation::equal && lhs != c.rhs)
			    || (c.relation == Relation::greater_equal && lhs < c.rhs))
			{
				return false;
			}
		}
		for (std::size_t k = 0; k < nv; ++k)
		{
			if (x[k] < 0)
			{
				return false;
			}
		}
		return true;
	};
	std::optional<Rational> best;
	const std::size_t total = rows.size();
	std::vector<std::size_t> pick(nv);
	std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth, std::size_t from) {
		if (depth == nv)
		{
			std::vector<std::vector<Rational>> a(nv, std::vector<Rational>(nv + 1));
			for (std::size_t r = 0; r < nv; ++r)
			{
				for (std::size_t k = 0; k < nv; ++k)
				{
					a[r][k] = rows[pick[r]][k];
				}
				a[r][nv] = rhs[pick[r]];
			}
			for (std::size_t col = 0; col < nv; ++col)
			{
				std::size_t piv = col;
				while (piv < nv && a[piv][col] == 0)
				{
					++piv;
				}
				if (piv == nv)
				{
					return;
				}
				std::swap(a[piv], a[col]);
				for (std::size_t r = 0; r < nv; ++r)
				{
					if (r != col && a[r][col] != 0)
					{
						Rational f = a[r][col] / a[col][col];
						for (std::size_t k = col; k <= nv; ++k)
						{
							a[r][k] -= f * a[col][k];
						}
					}
				}
			}
			std::vector<Rational> x(nv);
			for (std::size_t k = 0; k < nv; ++k)
			{
				x[k] = a[k][nv] / a[k][k];
			}
			if (feasible(x))
			{
				Rational value;
				for (std::size_t k = 0; k < nv; ++k)
				{
					value += lp.objective()[k] * x[k];
				}
				if (!best || value > *best)
				{
					best = value;
				}
			}
			return;
		}
		for (std::size_t r = from; r < total; ++r)
		{
			pick[depth] = r;
			choose(depth + 1, r + 1);
		}
	};
	choose(0, 0);
	return best;
}

TEST(LinearProgram, MatchesVertexEnumerationWithStrongDuality)
{
	Rng rng(11);
	int checked = 0;
	for (int trial = 0; trial < 300; ++trial)
	{
		const std::size_t nv = static_cast<std::size_t>(uniform(rng, 1, 3));
		const std::size_t nc = static_cast<std::size_t>(uniform(rng, 1, 6));
		LinearProgram lp(nv, Sense::maximize);
		for (std::size_t k = 0; k < nv; ++k)
		{
			lp.set_objective(k, make_rational(uniform(rng, -4, 6), uniform(rng, 1, 3)));
		}
		for (std::size_t c = 0; c < nc; ++c)
		{
			std::vector<Rational> row(nv);
			for (auto& v : row)
			{
				v = make_rational(uniform(rng, -3, 4), uniform(rng, 1, 2));
			}
			auto rel = static_cast<Relation>(uniform(rng, 0, 2));
			lp.add_constraint(row, rel, make_rational(uniform(rng, -3, 9), uniform(rng, 1, 2)));
		}
		// Box keeps the reference finite.
		for (std::size_t k = 0; k < nv; ++k)
		{
			std::vector<Rational> row(nv);
			row[k] = 1;
			lp.add_constraint(row, Relation::less_equal, q(10));
		}
		std::optional<Rational> expected = vertex_optimum(lp);
		LpResult r = solve_lp(lp);
		if (!expected)
		{
			EXPECT_EQ(r.status, LpStatus::infeasible);
			continue;
		}
		ASSERT_EQ(r.status, LpStatus::optimal);
		EXPECT_EQ(r.objective, *expected);
		// Strong duality and dual sign convention.
		Rational dual_objective;
		for (std::size_t c = 0; c < lp.num_constraints(); ++c)
		{
			const Constraint& con = lp.constraints()[c];
			dual_objective += con.rhs * r.duals[c];
			if (con.relation == Relation::less_equal)
			{
				EXPECT_GE(r.duals[c], 0);
			}
			if (con.relation == Relation::greater_equal)
			{
				EXPECT_LE(r.duals[c], 0);
			}
		}
		EXPECT_EQ(dual_objective, r.objective);
		++checked;
	}
	EXPECT_GT(checked, 100);
}

TEST(LinearProgram, MinimizeMirrorsMaximize)
{
	Rng rng(5);
	for (int trial = 0; trial < 100; ++trial)
	{
		const std::size_t nv = 3;
		LinearProgram mx(nv, Sense::maximize);
		LinearProgram mn(nv, Sense::minimize);
		for (std::size_t k = 0; k < nv; ++k)
		{
			Rational c = make_rational(uniform(rng, -5, 5), 2);
			mx.set_objective(k, c);
			mn.set_objective(k, -c);
		}
		for (int c = 0; c < 4; ++c)
		{
			std::vector<Rational> row(nv);
			for (auto& v : row)
			{
				v = uniform(rng, 0, 3);
			}
			Rational rhs = uniform(rng, 1, 8);
			mx.add_constraint(row, Relation::less_equal, rhs);
			mn.add_constraint(row, Relation::less_equal, rhs);
		}
		LpResult a = solve_lp(mx);
		LpResult b = solve_lp(mn);
		ASSERT_EQ(a.status, b.status);
		if (a.status == LpStatus::optimal)
		{
			EXPECT_EQ(a.objective, -b.objective);
		}
	}
}

TEST(SpanBasis, MembershipExamples)
{
	std::vector<std::vector<bool>> basis{{true, true, false}, {false, true, true}};
	EXPECT_FALSE(span_membership({true, false, true}, basis));
	EXPECT_TRUE(span_membership({true, false, false}, {{true, true, false}, {false, true, false}}));
	EXPECT_TRUE(span_membership({true, true, true}, {{true, true, true}}));

	SpanBasis span(3);
	EXPECT_TRUE(span.insert(std::vector<bool>{true, true, true}));
	EXPECT_FALSE(span.insert(std::vector<bool>{true, true, true}));
	EXPECT_TRUE(span.insert(std::vector<bool>{true, false, false}));
	EXPECT_TRUE(span.contains(std::vector<bool>{false, true, true}));
	EXPECT_FALSE(span.full());
	EXPECT_TRUE(span.insert(std::vector<bool>{false, true, false}));
	EXPECT_TRUE(span.full());
	EXPECT_EQ(span.rank(), 3U);
}

TEST(SpanBasis, RankMatchesDeterminantTestOnTriples)
{
	// Three 0/1 vectors of length 3 are independent iff det != 0.
	for (unsigned a = 1; a < 8; ++a)
	{
		for (unsigned b = 1; b < 8; ++b)
		{
			for (unsigned c = 1; c < 8; ++c)
			{
				auto bit = [](unsigned v, int k) { return static_cast<long>((v >> k) & 1U); };
				long det = bit(a, 0) * (bit(b, 1) * bit(c, 2) - bit(b, 2) * bit(c, 1))
				           - bit(a, 1) * (bit(b, 0) * bit(c, 2) - bit(b, 2) * bit(c, 0))
				           + bit(a, 2) * (bit(b, 0) * bit(c, 1) - bit(b, 1) * bit(c, 0));
				SpanBasis span(3);
				for (unsigned v : {a, b, c})
				{
					span.insert(std::vector<bool>{bit(v, 0) != 0, bit(v, 1) != 0, bit(v, 2) != 0});
				}
				EXPECT_EQ(span.full(), det != 0);
			}
		}
	}
}

} // namespace
