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
 * \file coopshare/shapley.hpp
 *
 * \brief Shapley values: closed form for the uncapacitated single-market
 *  game and subset enumeration for any value oracle.
 */

#ifndef COOPSHARE_SHAPLEY_HPP
#define COOPSHARE_SHAPLEY_HPP

#include <coopshare/coalition.hpp>
#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/rational.hpp>

#include <bit>
#include <cstddef>
#include <string>
#include <vector>

namespace coopshare {

inline constexpr std::size_t max_bruteforce_shapley_players = 10;

/// beta_t = (t-1)! (n-t)! / n!, the weight of a coalition of size t that
/// contains the player, and the binomial-weighted sums built from it.
class ShapleyWeights
{
public:
	explicit ShapleyWeights(std::size_t n)
	: n_(n),
	  factorial_(n + 1)
	{
		if (n == 0)
		{
			throw input_error("Shapley weights need at least one player");
		}
		factorial_[0] = 1;
		for (std::size_t k = 1; k <= n; ++k)
		{
			factorial_[k] = factorial_[k - 1] * static_cast<unsigned long>(k);
		}
		beta_.resize(n + 1);
		for (std::size_t t = 1; t <= n; ++t)
		{
			beta_[t] = make_rational(factorial_[t - 1] * factorial_[n - t], factorial_[n]);
		}
	}

	std::size_t players() const { return n_; }

	const Rational& beta(std::size_t t) const
	{
		if (t < 1 || t > n_)
		{
			throw internal_error("beta index " + std::to_string(t) + " outside 1.." + std::to_string(n_));
		}
		return beta_[t];
	}

	Integer binomial(std::size_t k, std::size_t l) const
	{
		if (l > k || k > n_)
		{
			return Integer(0);
		}
		return factorial_[k] / (factorial_[l] * factorial_[k - l]);
	}

	/// sum_{l=0..k} C(k, l) beta_{l + offset}
	Rational weighted_sum(std::size_t k, std::size_t offset) const
	{
		Rational sum;
		Integer c = 1;
		for (std::size_t l = 0; l <= k; ++l)
		{
			sum += Rational(c) * beta(l + offset);
			c = c * static_cast<unsigned long>(k - l) / static_cast<unsigned long>(l + 1);
		}
		return sum;
	}

private:
	std::size_t n_;
	std::vector<Integer> factorial_;
	std::vector<Rational> beta_;
};

/// v(T) - v(T \ i) for the single-market game (sorted positions), by the
/// position h of the smallest member of T other than i.
inline Rational marginal_contribution(const SingleMarketGame& g, const Coalition& t, std::size_t i)
{
	if (!t.contains(i))
	{
		throw input_error("player " + std::to_string(i + 1) + " is not in coalition " + t.to_string());
	}
	Coalition rest = t;
	rest.erase(i);
	if (rest.empty())
	{
		return g.lambda(i) * g.alpha(i);
	}
	std::size_t h = rest.first();
	if (h < i)
	{
		return g.lambda(i) * g.alpha(h);
	}
	Rational share;
	for (std::size_t k : rest.members())
	{
		share += g.lambda(k);
	}
	return share * (g.alpha(i) - g.alpha(h)) + g.lambda(i) * g.alpha(i);
}

/// Closed-form Shapley value of the uncapacitated single-market game, in
/// instance order and units. With 1-based sorted positions and
/// W(k, o) = sum_{l=0..k} C(k, l) beta_{l+o}:
///
///   S_i = lambda_i sum_{h<i} alpha_h W(n-h-1, 2)
///       + alpha_i lambda_i / n
///       + sum_{h>i} alpha_i lambda_i W(n-h, 2)
///       + sum_{h>i} (alpha_i - alpha_h) (lambda_h W(n-h, 2)
///                                        + sum_{j>h} lambda_j W(n-h-1, 3))
///
/// The last block is the extra demand i brings in when it replaces a
/// weaker minimum h, so its factor is alpha_i - alpha_h >= 0.
inline Allocation shapley_single_market(const SingleMarketGame& g)
{
	const std::size_t n = g.size();
	ShapleyWeights weights(n);

	// 1-based views.
	auto alpha = [&](std::size_t k) -> const Rational& { return g.alpha(k - 1); };
	auto lambda = [&](std::size_t k) -> const Rational& { return g.lambda(k - 1); };

	// w2[h] = W(n-h, 2) (h >= 2), w2m[h] = W(n-h-1, 2), w3m[h] = W(n-h-1, 3).
	std::vector<Rational> w2(n + 1);
	std::vector<Rational> w2m(n + 1);
	std::vector<Rational> w3m(n + 1);
	for (std::size_t h = 1; h <= n; ++h)
	{
		if (h >= 2)
		{
			w2[h] = weights.weighted_sum(n - h, 2);
			w3m[h] = h + 1 <= n ? weights.weighted_sum(n - h - 1, 3) : Rational(0);
		}
		w2m[h] = h + 1 <= n ? weights.weighted_sum(n - h - 1, 2) : Rational(0);
	}
	// tail[h] = sum_{j > h} lambda_j
	std::vector<Rational> tail(n + 1);
	for (std::size_t h = n; h-- > 1;)
	{
		tail[h] = tail[h + 1] + lambda(h + 1);
	}

	std::vector<Rational> sorted(n);
	const Rational n_players(static_cast<long>(n));
	for (std::size_t i = 1; i <= n; ++i)
	{
		Rational lower;
		for (std::size_t h = 1; h < i; ++h)
		{
			lower += alpha(h) * w2m[h];
		}
		Rational value = lambda(i) * lower;
		value += alpha(i) * lambda(i) / n_players;
		for (std::size_t h = i + 1; h <= n; ++h)
		{
			value += alpha(i) * lambda(i) * w2[h];
		}
		for (std::size_t h = i + 1; h <= n; ++h)
		{
			Rational gain = alpha(i) - alpha(h);
			if (gain == 0)
			{
				continue;
			}
			value += gain * (lambda(h) * w2[h] + tail[h] * w3m[h]);
		}
		sorted[i - 1] = value;
	}

	Allocation out;
	out.payoff = g.to_original(sorted);
	out.grand_value = g.alpha(0) * g.scale();
	out.method = Method::shapley;
	detail::ensure(out.efficient(), "closed-form Shapley value is not efficient");
	return out;
}

/// S_i = sum_{T containing i} beta_|T| (v(T) - v(T \ i)) by enumerating
/// every coalition.
inline Allocation shapley_bruteforce(const ValueOracle& v, std::size_t n)
{
	if (n == 0)
	{
		throw input_error("game without players");
	}
	check_enumerable(n, max_bruteforce_shapley_players);
	using Mask = Coalition::Mask;
	const Mask full = (Mask{1} << n) - 1;
	std::vector<Rational> value(full + 1);
	for (Mask s = 1; s <= full; ++s)
	{
		value[s] = v(Coalition::from_mask(n, s));
	}
	ShapleyWeights weights(n);

	Allocation out;
	out.payoff.assign(n, Rational(0));
	out.grand_value = value[full];
	out.method = Method::shapley;
	for (Mask t = 1; t <= full; ++t)
	{
		const Rational& beta = weights.beta(static_cast<std::size_t>(std::popcount(t)));
		for (std::size_t i = 0; i < n; ++i)
		{
			if ((t >> i) & 1U)
			{
				out.payoff[i] += beta * (value[t] - value[t & ~(Mask{1} << i)]);
			}
		}
	}
	return out;
}

} // namespace coopshare

#endif // COOPSHARE_SHAPLEY_HPP
