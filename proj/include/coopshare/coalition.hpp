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
 * \file coopshare/coalition.hpp
 *
 * \brief Coalitions of players as packed bitsets.
 */

#ifndef COOPSHARE_COALITION_HPP
#define COOPSHARE_COALITION_HPP

#include <coopshare/errors.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace coopshare {

/// Largest player count for which exhaustive coalition enumeration is
/// allowed (2^n - 2 proper coalitions).
inline constexpr std::size_t max_enumeration_players = 20;

/// Subset of the players {0, ..., n-1}. One 64-bit word covers n <= 64;
/// larger games use additional words.
class Coalition
{
public:
	using Mask = std::uint64_t;

	Coalition() = default;

	explicit Coalition(std::size_t players)
	: players_(players),
	  words_((players + 63) / 64, 0)
	{
	}

	Coalition(std::size_t players, std::initializer_list<std::size_t> members)
	: Coalition(players)
	{
		for (std::size_t i : members)
		{
			insert(i);
		}
	}

	static Coalition from_members(std::size_t players, const std::vector<std::size_t>& members)
	{
		Coalition c(players);
		for (std::size_t i : members)
		{
			c.insert(i);
		}
		return c;
	}

	static Coalition from_mask(std::size_t players, Mask mask)
	{
		if (players > 64)
		{
			throw input_error("mask form holds at most 64 players");
		}
		if (players < 64 && (mask >> players) != 0)
		{
			throw input_error("mask has bits beyond player count");
		}
		Coalition c(players);
		if (players > 0)
		{
			c.words_[0] = mask;
		}
		return c;
	}

	static Coalition grand(std::size_t players)
	{
		Coalition c(players);
		for (std::size_t i = 0; i < players; ++i)
		{
			c.insert(i);
		}
		return c;
	}

	std::size_t players() const { return players_; }

	bool contains(std::size_t i) const
	{
		return i < players_ && ((words_[i / 64] >> (i % 64)) & 1U) != 0;
	}

	void insert(std::size_t i)
	{
		check(i);
		words_[i / 64] |= Mask{1} << (i % 64);
	}

	void erase(std::size_t i)
	{
		check(i);
		words_[i / 64] &= ~(Mask{1} << (i % 64));
	}

	std::size_t size() const
	{
		std::size_t count = 0;
		for (Mask w : words_)
		{
			count += static_cast<std::size_t>(std::popcount(w));
		}
		return count;
	}

	bool empty() const
	{
		for (Mask w : words_)
		{
			if (w != 0)
			{
				return false;
			}
		}
		return true;
	}

	/// Smallest member; players() when empty.
	std::size_t first() const
	{
		for (std::size_t k = 0; k < words_.size(); ++k)
		{
			if (words_[k] != 0)
			{
				return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
			}
		}
		return players_;
	}

	std::vector<std::size_t> members() const
	{
		std::vector<std::size_t> out;
		for (std::size_t k = 0; k < words_.size(); ++k)
		{
			Mask w = words_[k];
			while (w != 0)
			{
				out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
				w &= w - 1;
			}
		}
		return out;
	}

	std::vector<bool> indicator() const
	{
		std::vector<bool> out(players_, false);
		for (std::size_t i : members())
		{
			out[i] = true;
		}
		return out;
	}

	Mask mask() const
	{
		if (players_ > 64)
		{
			throw input_error("coalition over more than 64 players has no mask form");
		}
		return words_.empty() ? 0 : words_[0];
	}

	bool is_subset_of(const Coalition& other) const
	{
		same_universe(other);
		for (std::size_t k = 0; k < words_.size(); ++k)
		{
			if ((words_[k] & ~other.words_[k]) != 0)
			{
				return false;
			}
		}
		return true;
	}

	Coalition operator|(const Coalition& other) const
	{
		same_universe(other);
		Coalition c = *this;
		for (std::size_t k = 0; k < words_.size(); ++k)
		{
			c.words_[k] |= other.words_[k];
		}
		return c;
	}

	Coalition operator&(const Coalition& other) const
	{
		same_universe(other);
		Coalition c = *this;
		for (std::size_t k = 0; k < words_.size(); ++k)
		{
			c.words_[k] &= other.words_[k];
		}
		return c;
	}

	Coalition complement() const
	{
		Coalition c = *this;
		for (std::size_t i = 0; i < players_; ++i)
		{
			if (contains(i))
			{
				c.erase(i);
			}
			else
			{
				c.insert(i);
			}
		}
		return c;
	}

	friend bool operator==(const Coalition&, const Coalition&) = default;

	/// "{1,3}" using 1-based player numbers.
	std::string to_string() const
	{
		std::string out = "{";
		bool first_member = true;
		for (std::size_t i : members())
		{
			if (!first_member)
			{
				out += ",";
			}
			out += std::to_string(i + 1);
			first_member = false;
		}
		return out + "}";
	}

private:
	void check(std::size_t i) const
	{
		if (i >= players_)
		{
			throw input_error("player index " + std::to_string(i) + " outside 0.." + std::to_string(players_));
		}
	}

	void same_universe(const Coalition& other) const
	{
		if (other.players_ != players_)
		{
			throw input_error("coalitions over different player sets");
		}
	}

	std::size_t players_ = 0;
	std::vector<Mask> words_;
};

inline void check_enumerable(std::size_t players, std::size_t limit = max_enumeration_players)
{
	if (players > limit)
	{
		throw size_error("exhaustive enumeration is limited to " + std::to_string(limit) + " players, got "
		                 + std::to_string(players));
	}
}

} // namespace coopshare

#endif // COOPSHARE_COALITION_HPP
