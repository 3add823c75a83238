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
 * \file coopshare/io.hpp
 *
 * \brief JSON instance and allocation files.
 *
 * Instance document:
 *
 *     {
 *       "players":  ["A", "B"],
 *       "markets":  [{"name": "north", "price": 4}],
 *       "cost":     [[1], [3]],
 *       "demand":   [["1/2"], ["1/2"]],
 *       "capacity": ["inf", 10]
 *     }
 *
 * Every number is an integer literal or a string "p/q"; floating-point
 * literals are rejected so that no rounding can enter. "capacity" may be
 * omitted (all unbounded).
 *
 * Allocation document: {"allocation": {"A": "2", "B": 1}}.
 */

#ifndef COOPSHARE_IO_HPP
#define COOPSHARE_IO_HPP

#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/rational.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace coopshare::io {

using json = nlohmann::ordered_json;

inline Rational parse_number(const json& node, const std::string& where)
{
	try
	{
		if (node.is_number_integer())
		{
			return node.is_number_unsigned() ? Rational(Integer(std::to_string(node.get<std::uint64_t>())))
			                                 : Rational(Integer(std::to_string(node.get<std::int64_t>())));
		}
		if (node.is_number_float())
		{
			throw input_error("floating-point literals are not accepted, write an integer or \"p/q\"");
		}
		if (node.is_string())
		{
			return parse_rational(node.get<std::string>());
		}
	}
	catch (const input_error& e)
	{
		throw input_error(where + ": " + e.what());
	}
	throw input_error(where + ": expected an integer or a \"p/q\" string");
}

inline json format_number(const Rational& r)
{
	if (is_integer(r) && r.get_num().fits_slong_p())
	{
		return json(static_cast<std::int64_t>(r.get_num().get_si()));
	}
	return json(to_string(r));
}

inline json parse_document(const std::string& text, const std::string& source)
{
	try
	{
		return json::parse(text);
	}
	catch (const json::parse_error& e)
	{
		throw input_error(source + ": " + e.what());
	}
}

inline std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
	{
		throw input_error("cannot open '" + path + "'");
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return buffer.str();
}

namespace detail {

inline const json& field(const json& doc, const char* key)
{
	if (!doc.is_object() || !doc.contains(key))
	{
		throw input_error(std::string("missing field '") + key + "'");
	}
	return doc.at(key);
}

inline std::string name_at(const json& node, const std::string& where)
{
	if (!node.is_string() || node.get<std::string>().empty())
	{
		throw input_error(where + ": expected a non-empty name string");
	}
	return node.get<std::string>();
}

inline Matrix parse_matrix(const json& node, const char* key, std::size_t rows, std::size_t cols)
{
	if (!node.is_array() || node.size() != rows)
	{
		throw input_error(std::string(key) + ": expected " + std::to_string(rows) + " rows (one per player)");
	}
	Matrix out(rows, std::vector<Rational>(cols));
	for (std::size_t i = 0; i < rows; ++i)
	{
		const json& row = node[i];
		std::string where = std::string(key) + "[" + std::to_string(i) + "]";
		if (!row.is_array() || row.size() != cols)
		{
			throw input_error(where + ": expected " + std::to_string(cols) + " entries (one per market)");
		}
		for (std::size_t j = 0; j < cols; ++j)
		{
			out[i][j] = parse_number(row[j], where + "[" + std::to_string(j) + "]");
		}
	}
	return out;
}

} // namespace detail

inline Instance parse_instance(const json& doc)
{
	if (!doc.is_object())
	{
		throw input_error("instance document must be a JSON object");
	}
	Instance inst;
	const json& players = detail::field(doc, "players");
	if (!players.is_array() || players.empty())
	{
		throw input_error("players: expected a non-empty list of names");
	}
	std::set<std::string> seen;
	for (std::size_t i = 0; i < players.size(); ++i)
	{
		std::string name = detail::name_at(players[i], "players[" + std::to_string(i) + "]");
		if (!seen.insert(name).second)
		{
			throw input_error("players[" + std::to_string(i) + "]: duplicate player name '" + name + "'");
		}
		inst.player_names.push_back(name);
	}
	const json& markets = detail::field(doc, "markets");
	if (!markets.is_array() || markets.empty())
	{
		throw input_error("markets: expected a non-empty list of {name, price}");
	}
	for (std::size_t j = 0; j < markets.size(); ++j)
	{
		std::string where = "markets[" + std::to_string(j) + "]";
		if (!markets[j].is_object())
		{
			throw input_error(where + ": expected an object with name and price");
		}
		try
		{
			inst.market_names.push_back(detail::name_at(detail::field(markets[j], "name"), where + ".name"));
			inst.price.push_back(parse_number(detail::field(markets[j], "price"), where + ".price"));
		}
		catch (const input_error& e)
		{
			std::string what = e.what();
			throw input_error(what.rfind(where, 0) == 0 ? what : where + ": " + what);
		}
	}
	const std::size_t n = inst.player_names.size();
	const std::size_t m = inst.market_names.size();
	inst.cost = detail::parse_matrix(detail::field(doc, "cost"), "cost", n, m);
	inst.demand = detail::parse_matrix(detail::field(doc, "demand"), "demand", n, m);
	inst.capacity.assign(n, std::nullopt);
	if (doc.contains("capacity"))
	{
		const json& cap = doc.at("capacity");
		if (!cap.is_array() || cap.size() != n)
		{
			throw input_error("capacity: expected " + std::to_string(n) + " entries (one per player)");
		}
		for (std::size_t i = 0; i < n; ++i)
		{
			if (cap[i].is_string() && cap[i].get<std::string>() == "inf")
			{
				continue;
			}
			inst.capacity[i] = parse_number(cap[i], "capacity[" + std::to_string(i) + "]");
		}
	}
	inst.validate();
	return inst;
}

inline Instance parse_instance(const std::string& text, const std::string& source = "instance")
{
	try
	{
		return parse_instance(parse_document(text, source));
	}
	catch (const input_error& e)
	{
		std::string what = e.what();
		if (what.rfind(source + ":", 0) == 0)
		{
			throw;
		}
		throw input_error(source + ": " + what);
	}
}

inline Instance load_instance(const std::string& path)
{
	return parse_instance(read_file(path), path);
}

inline json to_json(const Instance& inst)
{
	json doc;
	doc["players"] = inst.player_names;
	json markets = json::array();
	for (std::size_t j = 0; j < inst.markets(); ++j)
	{
		markets.push_back(json{{"name", inst.market_names[j]}, {"price", format_number(inst.price[j])}});
	}
	doc["markets"] = markets;
	auto matrix = [](const Matrix& mat) {
		json rows = json::array();
		for (const auto& row : mat)
		{
			json r = json::array();
			for (const Rational& v : row)
			{
				r.push_back(format_number(v));
			}
			rows.push_back(r);
		}
		return rows;
	};
	doc["cost"] = matrix(inst.cost);
	doc["demand"] = matrix(inst.demand);
	json cap = json::array();
	for (const auto& q : inst.capacity)
	{
		cap.push_back(q ? format_number(*q) : json("inf"));
	}
	doc["capacity"] = cap;
	return doc;
}

inline std::string serialize_instance(const Instance& inst)
{
	return to_json(inst).dump(2) + "\n";
}

/// Payoffs keyed by player name, returned in instance order.
inline std::vector<Rational> parse_allocation(const json& doc, const std::vector<std::string>& players)
{
	const json& alloc = detail::field(doc, "allocation");
	if (!alloc.is_object())
	{
		throw input_error("allocation: expected an object mapping player names to payoffs");
	}
	std::vector<Rational> out(players.size());
	std::vector<bool> given(players.size(), false);
	for (auto it = alloc.begin(); it != alloc.end(); ++it)
	{
		auto pos = std::find(players.begin(), players.end(), it.key());
		if (pos == players.end())
		{
			throw input_error("allocation: unknown player '" + it.key() + "'");
		}
		std::size_t i = static_cast<std::size_t>(pos - players.begin());
		out[i] = parse_number(it.value(), "allocation." + it.key());
		given[i] = true;
	}
	for (std::size_t i = 0; i < players.size(); ++i)
	{
		if (!given[i])
		{
			throw input_error("allocation: no payoff for player '" + players[i] + "'");
		}
	}
	return out;
}

inline std::vector<Rational> load_allocation(const std::string& path, const std::vector<std::string>& players)
{
	try
	{
		return parse_allocation(parse_document(read_file(path), path), players);
	}
	catch (const input_error& e)
	{
		std::string what = e.what();
		if (what.rfind(path + ":", 0) == 0)
		{
			throw;
		}
		throw input_error(path + ": " + what);
	}
}

} // namespace coopshare::io

#endif // COOPSHARE_IO_HPP
