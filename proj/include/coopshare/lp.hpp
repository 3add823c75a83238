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
 * \file coopshare/lp.hpp
 *
 * \brief Dense exact-rational linear programming.
 *
 * solve_lp() runs a revised two-phase simplex with Bland's smallest-index
 * rule on a standard-form problem (min c'z, Az = b, z >= 0). Two routes
 * build that standard form:
 *
 *  - primal route: split free variables, add one slack per inequality;
 *    the standard form has one row per constraint.
 *  - dual route: write the LP dual in standard form; it has one row per
 *    variable, and the simplex multipliers of the dual are the primal
 *    solution.
 *
 * The dual route is taken when the LP has more constraints than variables,
 * which is the case for every coalition LP (2^n rows, n+1 columns).
 *
 * Duals follow the shadow-price convention y_i = d(optimum)/d(rhs_i), so
 * b'y equals the optimal value and complementary slackness reads
 * y_i != 0 => row i tight.
 */

#ifndef COOPSHARE_LP_HPP
#define COOPSHARE_LP_HPP

#include <coopshare/errors.hpp>
#include <coopshare/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coopshare {

enum class Sense
{
	maximize,
	minimize
};

enum class Relation
{
	less_equal,
	equal,
	greater_equal
};

enum class Bound
{
	nonnegative,
	free
};

struct Constraint
{
	std::vector<Rational> coefficients;
	Relation relation = Relation::less_equal;
	Rational rhs;
};

class LinearProgram
{
public:
	explicit LinearProgram(std::size_t num_variables, Sense sense = Sense::maximize)
	: sense_(sense),
	  objective_(num_variables),
	  bounds_(num_variables, Bound::nonnegative)
	{
	}

	std::size_t num_variables() const { return objective_.size(); }
	std::size_t num_constraints() const { return constraints_.size(); }
	Sense sense() const { return sense_; }
	const std::vector<Rational>& objective() const { return objective_; }
	const std::vector<Bound>& bounds() const { return bounds_; }
	const std::vector<Constraint>& constraints() const { return constraints_; }

	void set_objective(std::vector<Rational> coefficients)
	{
		check_width(coefficients.size());
		objective_ = std::move(coefficients);
	}

	void set_objective(std::size_t variable, Rational coefficient)
	{
		check_index(variable);
		objective_[variable] = std::move(coefficient);
	}

	void set_bound(std::size_t variable, Bound bound)
	{
		check_index(variable);
		bounds_[variable] = bound;
	}

	std::size_t add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs)
	{
		check_width(coefficients.size());
		constraints_.push_back(Constraint{std::move(coefficients), relation, std::move(rhs)});
		return constraints_.size() - 1;
	}

private:
	void check_width(std::size_t width) const
	{
		if (width != objective_.size())
		{
			throw input_error("LP row has " + std::to_string(width) + " coefficients, expected "
			                  + std::to_string(objective_.size()));
		}
	}

	void check_index(std::size_t variable) const
	{
		if (variable >= objective_.size())
		{
			throw input_error("LP variable index " + std::to_string(variable) + " out of range");
		}
	}

	Sense sense_;
	std::vector<Rational> objective_;
	std::vector<Bound> bounds_;
	std::vector<Constraint> constraints_;
};

enum class LpStatus
{
	optimal,
	infeasible,
	unbounded
};

inline const char* to_string(LpStatus status)
{
	switch (status)
	{
	case LpStatus::optimal: return "optimal";
	case LpStatus::infeasible: return "infeasible";
	case LpStatus::unbounded: return "unbounded";
	}
	return "?";
}

struct LpResult
{
	LpStatus status = LpStatus::infeasible;
	Rational objective;
	std::vector<Rational> primal;
	std::vector<Rational> duals;
	/// Constraints whose rows define the returned vertex (in the simplex
	/// basis). Every basic constraint is tight; only basic constraints can
	/// carry a non-zero dual.
	std::vector<std::size_t> basis;
};

namespace detail {

struct SparseEntry
{
	std::size_t row;
	Rational value;
	int unit; // +1 / -1 when value is exactly that, 0 otherwise
};

using SparseColumn = std::vector<SparseEntry>;

inline void push_entry(SparseColumn& column, std::size_t row, const Rational& value)
{
	if (value == 0)
	{
		return;
	}
	int unit = value == 1 ? 1 : (value == -1 ? -1 : 0);
	column.push_back(SparseEntry{row, value, unit});
}

/// min c'z s.t. Az = b, z >= 0, columns stored sparse.
struct StandardForm
{
	std::size_t rows = 0;
	std::vector<SparseColumn> columns;
	std::vector<Rational> cost;
	std::vector<Rational> rhs;
};

struct StandardResult
{
	LpStatus status = LpStatus::infeasible;
	std::vector<Rational> values;      // one per column
	std::vector<Rational> multipliers; // one per row
	std::vector<std::size_t> basic;    // basic column per row (may be artificial)
	Rational objective;
};

/// Revised two-phase simplex, explicit dense basis inverse, Bland's rule.
class RevisedSimplex
{
public:
	explicit RevisedSimplex(const StandardForm& form)
	: form_(form),
	  m_(form.rows),
	  n_(form.columns.size()),
	  flipped_(m_, false)
	{
		b_.resize(m_);
		for (std::size_t r = 0; r < m_; ++r)
		{
			b_[r] = form.rhs[r];
			if (b_[r] < 0)
			{
				b_[r] = -b_[r];
				flipped_[r] = true;
			}
		}
	}

	StandardResult solve()
	{
		StandardResult result;

		// Phase I: artificial basis.
		inverse_.assign(m_, std::vector<Rational>(m_));
		basic_.resize(m_);
		x_b_ = b_;
		for (std::size_t r = 0; r < m_; ++r)
		{
			inverse_[r][r] = 1;
			basic_[r] = n_ + r;
		}
		phase_one_ = true;
		run(); // phase I is never unbounded
		Rational infeasibility;
		for (std::size_t r = 0; r < m_; ++r)
		{
			if (basic_[r] >= n_)
			{
				infeasibility += x_b_[r];
			}
		}
		if (infeasibility != 0)
		{
			result.status = LpStatus::infeasible;
			return result;
		}
		drive_out_artificials();

		phase_one_ = false;
		if (!run())
		{
			result.status = LpStatus::unbounded;
			return result;
		}

		result.status = LpStatus::optimal;
		result.values.assign(n_, Rational(0));
		for (std::size_t r = 0; r < m_; ++r)
		{
			if (basic_[r] < n_)
			{
				result.values[basic_[r]] = x_b_[r];
			}
		}
		compute_multipliers();
		result.multipliers = pi_;
		for (std::size_t r = 0; r < m_; ++r)
		{
			if (flipped_[r])
			{
				result.multipliers[r] = -result.multipliers[r];
			}
		}
		for (std::size_t j = 0; j < n_; ++j)
		{
			if (result.values[j] != 0)
			{
				result.objective += form_.cost[j] * result.values[j];
			}
		}
		result.basic = basic_;
		return result;
	}

private:
	const Rational& cost(std::size_t j) const
	{
		static const Rational zero(0);
		static const Rational one(1);
		if (phase_one_)
		{
			return j >= n_ ? one : zero;
		}
		return j >= n_ ? zero : form_.cost[j];
	}

	// Entry (r, j) of the row-flipped constraint matrix.
	void column_times_inverse(std::size_t j, std::vector<Rational>& out) const
	{
		for (std::size_t r = 0; r < m_; ++r)
		{
			out[r] = 0;
		}
		if (j >= n_)
		{
			std::size_t row = j - n_;
			for (std::size_t r = 0; r < m_; ++r)
			{
				out[r] = inverse_[r][row];
			}
			return;
		}
		for (const SparseEntry& e : form_.columns[j])
		{
			bool neg = flipped_[e.row];
			for (std::size_t r = 0; r < m_; ++r)
			{
				const Rational& inv = inverse_[r][e.row];
				if (inv == 0)
				{
					continue;
				}
				int unit = neg ? -e.unit : e.unit;
				if (unit == 1)
				{
					out[r] += inv;
				}
				else if (unit == -1)
				{
					out[r] -= inv;
				}
				else if (neg)
				{
					out[r] -= inv * e.value;
				}
				else
				{
					out[r] += inv * e.value;
				}
			}
		}
	}

	void compute_multipliers()
	{
		pi_.assign(m_, Rational(0));
		for (std::size_t r = 0; r < m_; ++r)
		{
			const Rational& c = cost(basic_[r]);
			if (c == 0)
			{
				continue;
			}
			for (std::size_t k = 0; k < m_; ++k)
			{
				if (inverse_[r][k] != 0)
				{
					pi_[k] += c * inverse_[r][k];
				}
			}
		}
	}

	bool reduced_cost_negative(std::size_t j, Rational& scratch) const
	{
		scratch = cost(j);
		for (const SparseEntry& e : form_.columns[j])
		{
			const Rational& p = pi_[e.row];
			if (p == 0)
			{
				continue;
			}
			int unit = flipped_[e.row] ? -e.unit : e.unit;
			if (unit == 1)
			{
				scratch -= p;
			}
			else if (unit == -1)
			{
				scratch += p;
			}
			else if (flipped_[e.row])
			{
				scratch += p * e.value;
			}
			else
			{
				scratch -= p * e.value;
			}
		}
		return scratch < 0;
	}

	// Returns false when the objective is unbounded below.
	bool run()
	{
		std::vector<bool> is_basic(n_ + m_, false);
		for (std::size_t r = 0; r < m_; ++r)
		{
			is_basic[basic_[r]] = true;
		}
		std::vector<Rational> u(m_);
		Rational scratch;
		Rational best_ratio;
		Rational ratio;
		for (;;)
		{
			compute_multipliers();
			// Bland: smallest-index column with negative reduced cost.
			// Artificial columns never re-enter.
			std::size_t entering = n_;
			for (std::size_t j = 0; j < n_; ++j)
			{
				if (!is_basic[j] && reduced_cost_negative(j, scratch))
				{
					entering = j;
					break;
				}
			}
			if (entering == n_)
			{
				return true;
			}

			column_times_inverse(entering, u);
			// Bland: among minimum ratios, smallest basic index leaves.
			std::size_t leaving = m_;
			for (std::size_t r = 0; r < m_; ++r)
			{
				if (u[r] <= 0)
				{
					continue;
				}
				ratio = x_b_[r] / u[r];
				if (leaving == m_ || ratio < best_ratio
				    || (ratio == best_ratio && basic_[r] < basic_[leaving]))
				{
					leaving = r;
					best_ratio = ratio;
				}
			}
			if (leaving == m_)
			{
				return false;
			}
			is_basic[basic_[leaving]] = false;
			is_basic[entering] = true;
			pivot(leaving, entering, u);
		}
	}

	void pivot(std::size_t row, std::size_t entering, const std::vector<Rational>& u)
	{
		Rational pivot_value = u[row];
		for (std::size_t k = 0; k < m_; ++k)
		{
			if (inverse_[row][k] != 0)
			{
				inverse_[row][k] /= pivot_value;
			}
		}
		x_b_[row] /= pivot_value;
		for (std::size_t r = 0; r < m_; ++r)
		{
			if (r == row || u[r] == 0)
			{
				continue;
			}
			const Rational& factor = u[r];
			for (std::size_t k = 0; k < m_; ++k)
			{
				if (inverse_[row][k] != 0)
				{
					inverse_[r][k] -= factor * inverse_[row][k];
				}
			}
			if (x_b_[row] != 0)
			{
				x_b_[r] -= factor * x_b_[row];
			}
		}
		basic_[row] = entering;
	}

	// After phase I, replace zero-level basic artificials by structural
	// columns where possible. A row where that fails is redundant; its
	// artificial stays basic at zero and never moves.
	void drive_out_artificials()
	{
		std::vector<bool> is_basic(n_ + m_, false);
		for (std::size_t r = 0; r < m_; ++r)
		{
			is_basic[basic_[r]] = true;
		}
		std::vector<Rational> u(m_);
		for (std::size_t r = 0; r < m_; ++r)
		{
			if (basic_[r] < n_)
			{
				continue;
			}
			for (std::size_t j = 0; j < n_; ++j)
			{
				if (is_basic[j])
				{
					continue;
				}
				column_times_inverse(j, u);
				if (u[r] != 0)
				{
					is_basic[basic_[r]] = false;
					is_basic[j] = true;
					pivot(r, j, u);
					break;
				}
			}
		}
	}

	const StandardForm& form_;
	std::size_t m_;
	std::size_t n_;
	std::vector<bool> flipped_;
	std::vector<Rational> b_;
	std::vector<std::vector<Rational>> inverse_;
	std::vector<std::size_t> basic_;
	std::vector<Rational> x_b_;
	std::vector<Rational> pi_;
	bool phase_one_ = true;
};

inline LpResult solve_primal_route(const LinearProgram& lp)
{
	const std::size_t nv = lp.num_variables();
	const std::size_t nc = lp.num_constraints();
	const bool maximize = lp.sense() == Sense::maximize;

	StandardForm form;
	form.rows = nc;
	form.rhs.resize(nc);
	for (std::size_t i = 0; i < nc; ++i)
	{
		form.rhs[i] = lp.constraints()[i].rhs;
	}

	// Column layout: per variable z+ (and z- when free), then slacks.
	std::vector<std::size_t> plus_col(nv);
	std::vector<std::optional<std::size_t>> minus_col(nv);
	for (std::size_t j = 0; j < nv; ++j)
	{
		Rational c = maximize ? Rational(-lp.objective()[j]) : lp.objective()[j];
		SparseColumn column;
		for (std::size_t i = 0; i < nc; ++i)
		{
			push_entry(column, i, lp.constraints()[i].coefficients[j]);
		}
		plus_col[j] = form.columns.size();
		form.columns.push_back(column);
		form.cost.push_back(c);
		if (lp.bounds()[j] == Bound::free)
		{
			SparseColumn negated;
			for (const SparseEntry& e : column)
			{
				push_entry(negated, e.row, Rational(-e.value));
			}
			minus_col[j] = form.columns.size();
			form.columns.push_back(negated);
			form.cost.push_back(Rational(-c));
		}
	}
	std::vector<std::optional<std::size_t>> slack_col(nc);
	for (std::size_t i = 0; i < nc; ++i)
	{
		Relation rel = lp.constraints()[i].relation;
		if (rel == Relation::equal)
		{
			continue;
		}
		SparseColumn column;
		push_entry(column, i, Rational(rel == Relation::less_equal ? 1 : -1));
		slack_col[i] = form.columns.size();
		form.columns.push_back(column);
		form.cost.push_back(Rational(0));
	}

	StandardResult sr = RevisedSimplex(form).solve();
	LpResult result;
	result.status = sr.status;
	if (sr.status != LpStatus::optimal)
	{
		return result;
	}
	result.primal.resize(nv);
	for (std::size_t j = 0; j < nv; ++j)
	{
		result.primal[j] = sr.values[plus_col[j]];
		if (minus_col[j])
		{
			result.primal[j] -= sr.values[*minus_col[j]];
		}
	}
	result.objective = maximize ? Rational(-sr.objective) : sr.objective;
	result.duals.resize(nc);
	for (std::size_t i = 0; i < nc; ++i)
	{
		result.duals[i] = maximize ? Rational(-sr.multipliers[i]) : sr.multipliers[i];
	}
	std::vector<bool> slack_basic(form.columns.size() + nc, false);
	for (std::size_t b : sr.basic)
	{
		slack_basic[b] = true;
	}
	for (std::size_t i = 0; i < nc; ++i)
	{
		if (!slack_col[i] || !slack_basic[*slack_col[i]])
		{
			result.basis.push_back(i);
		}
	}
	return result;
}

// Dual of the LP written as max c'x (min problems negate c):
// min b'y, y_i >= 0 for <= rows, y_i <= 0 for >= rows, y_i free for = rows,
// sum_i a_ij y_i >= c_j for x_j >= 0, = c_j for free x_j.
inline StandardForm build_dual_form(const LinearProgram& lp, bool zero_objective,
                                    std::vector<std::pair<std::size_t, int>>& origin)
{
	const std::size_t nv = lp.num_variables();
	const std::size_t nc = lp.num_constraints();
	const bool maximize = lp.sense() == Sense::maximize;

	StandardForm form;
	form.rows = nv;
	form.rhs.resize(nv);
	if (!zero_objective)
	{
		for (std::size_t j = 0; j < nv; ++j)
		{
			form.rhs[j] = maximize ? lp.objective()[j] : Rational(-lp.objective()[j]);
		}
	}
	origin.clear();
	for (std::size_t i = 0; i < nc; ++i)
	{
		const Constraint& c = lp.constraints()[i];
		auto add = [&](int sign) {
			SparseColumn column;
			for (std::size_t j = 0; j < nv; ++j)
			{
				if (c.coefficients[j] != 0)
				{
					push_entry(column, j, sign > 0 ? c.coefficients[j] : Rational(-c.coefficients[j]));
				}
			}
			form.columns.push_back(std::move(column));
			form.cost.push_back(sign > 0 ? c.rhs : Rational(-c.rhs));
			origin.emplace_back(i, sign);
		};
		switch (c.relation)
		{
		case Relation::less_equal: add(+1); break;
		case Relation::greater_equal: add(-1); break;
		case Relation::equal:
			add(+1);
			add(-1);
			break;
		}
	}
	for (std::size_t j = 0; j < nv; ++j)
	{
		if (lp.bounds()[j] == Bound::nonnegative)
		{
			SparseColumn column;
			push_entry(column, j, Rational(-1));
			form.columns.push_back(std::move(column));
			form.cost.push_back(Rational(0));
			origin.emplace_back(nc, 0);
		}
	}
	return form;
}

inline LpResult solve_dual_route(const LinearProgram& lp)
{
	const std::size_t nv = lp.num_variables();
	const std::size_t nc = lp.num_constraints();
	const bool maximize = lp.sense() == Sense::maximize;

	std::vector<std::pair<std::size_t, int>> origin;
	StandardForm form = build_dual_form(lp, false, origin);
	StandardResult sr = RevisedSimplex(form).solve();

	LpResult result;
	if (sr.status == LpStatus::unbounded)
	{
		result.status = LpStatus::infeasible;
		return result;
	}
	if (sr.status == LpStatus::infeasible)
	{
		// Primal is infeasible or unbounded; the dual of the feasibility
		// problem max 0 is always feasible and tells them apart.
		StandardForm probe = build_dual_form(lp, true, origin);
		StandardResult pr = RevisedSimplex(probe).solve();
		result.status = pr.status == LpStatus::unbounded ? LpStatus::infeasible : LpStatus::unbounded;
		return result;
	}

	result.status = LpStatus::optimal;
	result.primal = sr.multipliers;
	result.objective = maximize ? sr.objective : Rational(-sr.objective);
	result.duals.assign(nc, Rational(0));
	for (std::size_t k = 0; k < origin.size(); ++k)
	{
		auto [row, sign] = origin[k];
		if (row < nc && sr.values[k] != 0)
		{
			if (sign > 0)
			{
				result.duals[row] += sr.values[k];
			}
			else
			{
				result.duals[row] -= sr.values[k];
			}
		}
	}
	if (!maximize)
	{
		for (Rational& y : result.duals)
		{
			y = -y;
		}
	}
	std::vector<bool> in_basis(nc, false);
	for (std::size_t b : sr.basic)
	{
		if (b < origin.size() && origin[b].first < nc)
		{
			in_basis[origin[b].first] = true;
		}
	}
	for (std::size_t i = 0; i < nc; ++i)
	{
		if (in_basis[i])
		{
			result.basis.push_back(i);
		}
	}
	(void) nv;
	return result;
}

} // namespace detail

/// Solves `lp` exactly. Deterministic: identical input gives identical
/// output, including which optimal vertex is returned.
inline LpResult solve_lp(const LinearProgram& lp)
{
	if (lp.num_constraints() > lp.num_variables())
	{
		return detail::solve_dual_route(lp);
	}
	return detail::solve_primal_route(lp);
}

/// Incrementally maintained row space of 0/1 characteristic vectors, kept
/// in reduced row echelon form.
class SpanBasis
{
public:
	explicit SpanBasis(std::size_t dimension)
	: dimension_(dimension)
	{
	}

	std::size_t dimension() const { return dimension_; }
	std::size_t rank() const { return rows_.size(); }
	bool full() const { return rows_.size() == dimension_; }

	bool contains(const std::vector<Rational>& vector) const
	{
		check(vector.size());
		std::vector<Rational> residual = vector;
		reduce(residual);
		for (const Rational& v : residual)
		{
			if (v != 0)
			{
				return false;
			}
		}
		return true;
	}

	bool contains(const std::vector<bool>& indicator) const
	{
		return contains(to_vector(indicator));
	}

	/// Adds `vector`; returns false (and changes nothing) when it already
	/// lies in the span.
	bool insert(const std::vector<Rational>& vector)
	{
		check(vector.size());
		std::vector<Rational> residual = vector;
		reduce(residual);
		std::size_t pivot = dimension_;
		for (std::size_t k = 0; k < dimension_; ++k)
		{
			if (residual[k] != 0)
			{
				pivot = k;
				break;
			}
		}
		if (pivot == dimension_)
		{
			return false;
		}
		Rational lead = residual[pivot];
		for (Rational& v : residual)
		{
			v /= lead;
		}
		for (Row& row : rows_)
		{
			if (row.values[pivot] != 0)
			{
				Rational factor = row.values[pivot];
				for (std::size_t k = 0; k < dimension_; ++k)
				{
					if (residual[k] != 0)
					{
						row.values[k] -= factor * residual[k];
					}
				}
			}
		}
		rows_.push_back(Row{pivot, std::move(residual)});
		return true;
	}

	bool insert(const std::vector<bool>& indicator)
	{
		return insert(to_vector(indicator));
	}

private:
	struct Row
	{
		std::size_t pivot;
		std::vector<Rational> values;
	};

	void check(std::size_t size) const
	{
		if (size != dimension_)
		{
			throw input_error("vector of length " + std::to_string(size) + " in a span of dimension "
			                  + std::to_string(dimension_));
		}
	}

	static std::vector<Rational> to_vector(const std::vector<bool>& indicator)
	{
		std::vector<Rational> v(indicator.size());
		for (std::size_t k = 0; k < indicator.size(); ++k)
		{
			if (indicator[k])
			{
				v[k] = 1;
			}
		}
		return v;
	}

	void reduce(std::vector<Rational>& residual) const
	{
		for (const Row& row : rows_)
		{
			if (residual[row.pivot] == 0)
			{
				continue;
			}
			Rational factor = residual[row.pivot];
			for (std::size_t k = 0; k < dimension_; ++k)
			{
				if (row.values[k] != 0)
				{
					residual[k] -= factor * row.values[k];
				}
			}
		}
	}

	std::size_t dimension_;
	std::vector<Row> rows_;
};

/// True iff `target` lies in the rational span of `basis`. All vectors are
/// 0/1 characteristic vectors of the same length.
inline bool span_membership(const std::vector<bool>& target, const std::vector<std::vector<bool>>& basis)
{
	SpanBasis span(target.size());
	for (const std::vector<bool>& b : basis)
	{
		span.insert(b);
	}
	return span.contains(target);
}

} // namespace coopshare

#endif // COOPSHARE_LP_HPP
