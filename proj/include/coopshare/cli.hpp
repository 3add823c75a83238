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
 * \file coopshare/cli.hpp
 *
 * \brief The coopshare command line: value, allocate and check.
 *
 * run() takes the argument vector and two streams so the whole command
 * line can be driven from tests. Exit codes: 0 success, 2 input error,
 * 3 size-guard error, 4 internal invariant breach.
 */

#ifndef COOPSHARE_CLI_HPP
#define COOPSHARE_CLI_HPP

#include <coopshare/coalition.hpp>
#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/io.hpp>
#include <coopshare/multimarket.hpp>
#include <coopshare/nucleolus.hpp>
#include <coopshare/rational.hpp>
#include <coopshare/shapley.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace coopshare::cli {

enum ExitCode : int
{
	exit_ok = 0,
	exit_input = 2,
	exit_size = 3,
	exit_internal = 4
};

/// Largest game whose allocation report is verified against the core by
/// enumeration when no polynomial check applies.
inline constexpr std::size_t max_report_core_check = 12;

struct Options
{
	std::string instance;
	std::string allocation;
	std::string coalition = "all";
	std::string method;
	bool oracle = false;
	bool trace = false;
	bool exact = false;
	bool plan = false;
	bool json_style = false;
	int precision = 6;
};

using json = nlohmann::ordered_json;

/// Formatting shared by both report forms.
class Formatter
{
public:
	explicit Formatter(const Options& options)
	: options_(options)
	{
	}

	json number(const Rational& r) const
	{
		json out{{"exact", to_string(r)}};
		if (!options_.exact)
		{
			out["decimal"] = to_decimal(r, options_.precision);
		}
		return out;
	}

	std::string text(const Rational& r) const
	{
		if (options_.exact)
		{
			return to_string(r);
		}
		return to_string(r) + " (" + to_decimal(r, options_.precision) + ")";
	}

private:
	const Options& options_;
};

namespace detail {

inline std::vector<std::string> coalition_names(const Coalition& s, const std::vector<std::string>& names)
{
	std::vector<std::string> out;
	for (std::size_t i : s.members())
	{
		out.push_back(names[i]);
	}
	return out;
}

inline std::string braces(const std::vector<std::string>& names)
{
	std::string out = "{";
	for (std::size_t k = 0; k < names.size(); ++k)
	{
		out += (k ? "," : "") + names[k];
	}
	return out + "}";
}

inline Coalition parse_coalition(const std::string& spec, const std::vector<std::string>& players)
{
	const std::size_t n = players.size();
	if (spec == "all")
	{
		return Coalition::grand(n);
	}
	Coalition s(n);
	std::stringstream stream(spec);
	std::string name;
	std::size_t count = 0;
	while (std::getline(stream, name, ','))
	{
		auto pos = std::find(players.begin(), players.end(), name);
		if (pos == players.end())
		{
			throw input_error("--coalition: unknown player '" + name + "'");
		}
		std::size_t i = static_cast<std::size_t>(pos - players.begin());
		if (s.contains(i))
		{
			throw input_error("--coalition: player '" + name + "' listed twice");
		}
		s.insert(i);
		++count;
	}
	if (count == 0)
	{
		throw input_error("--coalition: empty coalition");
	}
	return s;
}

inline std::vector<std::size_t> active_markets(const NormalizedInstance& inst)
{
	std::vector<std::size_t> out;
	for (std::size_t j = 0; j < inst.markets(); ++j)
	{
		if (inst.market_demand(j) != 0)
		{
			out.push_back(j);
		}
	}
	return out;
}

/// Core status of x: polynomial for one uncapacitated market, enumeration
/// for small games, otherwise whatever the method certifies.
struct CoreStatus
{
	std::optional<bool> in_core;
	std::string how; // "verified", "by construction", "not checked"
	std::optional<Coalition> witness;
	Rational excess;
};

inline CoreStatus core_status(const NormalizedInstance& inst, const Allocation& x, std::size_t limit)
{
	CoreStatus out;
	std::vector<std::size_t> markets = active_markets(inst);
	std::optional<CoreCheck> check;
	Rational scale(1);
	std::optional<SingleMarketGame> single;
	if (inst.uncapacitated() && markets.size() == 1)
	{
		single = to_single_market(inst, markets.front());
		check = core_check(*single, single->to_sorted(x.payoff));
		scale = single->scale();
	}
	else if (inst.players() <= limit)
	{
		check = core_check(make_value_oracle(inst), x.payoff, inst.players());
	}
	if (check)
	{
		out.in_core = check->in_core;
		out.how = "verified";
		if (check->coalition)
		{
			out.witness = single ? single->to_original(*check->coalition) : *check->coalition;
			out.excess = check->excess * scale;
		}
		return out;
	}
	out.in_core = x.in_core;
	out.how = x.in_core ? "by construction" : "not checked";
	return out;
}

struct Outcome
{
	json report;
	std::vector<std::string> lines;
};

inline void put_core(Outcome& o, const CoreStatus& status, const std::vector<std::string>& names,
                     const Formatter& fmt)
{
	json core{{"in_core", status.in_core ? json(*status.in_core) : json(nullptr)}, {"how", status.how}};
	std::string line = "core: ";
	if (!status.in_core)
	{
		line += "unknown";
	}
	else if (*status.in_core)
	{
		line += "in core (" + status.how + ")";
	}
	else
	{
		line += "NOT in core";
	}
	if (status.witness && status.in_core && !*status.in_core)
	{
		std::vector<std::string> w = coalition_names(*status.witness, names);
		core["violated_coalition"] = w;
		core["excess"] = fmt.number(status.excess);
		line += ", violated by " + braces(w) + " with excess " + fmt.text(status.excess);
	}
	o.report["core"] = core;
	o.lines.push_back(line);
}

inline void put_payoffs(Outcome& o, const std::vector<Rational>& payoff, const std::vector<std::string>& names,
                        const Formatter& fmt, bool exact)
{
	json rows = json::array();
	std::size_t width = 6;
	std::size_t exact_width = 5;
	for (std::size_t i = 0; i < names.size(); ++i)
	{
		rows.push_back(json{{"player", names[i]}, {"payoff", fmt.number(payoff[i])}});
		width = std::max(width, names[i].size());
		exact_width = std::max(exact_width, to_string(payoff[i]).size());
	}
	o.report["allocation"] = rows;

	auto pad = [](std::string s, std::size_t w) {
		s.resize(std::max(w, s.size()), ' ');
		return s;
	};
	std::string header = pad("player", width) + "  " + pad("exact", exact_width);
	if (!exact)
	{
		header += "  decimal";
	}
	o.lines.push_back(header);
	for (std::size_t i = 0; i < names.size(); ++i)
	{
		std::string row = pad(names[i], width) + "  " + pad(to_string(payoff[i]), exact_width);
		if (!exact)
		{
			row += "  " + rows[i]["payoff"]["decimal"].get<std::string>();
		}
		while (!row.empty() && row.back() == ' ')
		{
			row.pop_back();
		}
		o.lines.push_back(row);
	}
}

inline void trace_primal_dual(Outcome& o, const PrimalDualResult& result, const SingleMarketGame& g,
                              const std::vector<std::string>& names, const std::string& market, const Formatter& fmt)
{
	json& trace = o.report["trace"];
	if (trace.is_null())
	{
		trace = json::array();
	}
	for (const PrimalDualIteration& it : result.trace)
	{
		Rational step = it.step * g.scale();
		Rational eps = it.state.epsilon * g.scale();
		std::vector<std::string> tight = coalition_names(g.to_original(it.tight), names);
		std::vector<std::string> fixed = coalition_names(g.to_original(it.state.family.base()), names);
		trace.push_back(json{{"market", market},
		                     {"iteration", it.state.iteration},
		                     {"step", fmt.number(step)},
		                     {"epsilon", fmt.number(eps)},
		                     {"tight", tight},
		                     {"fixed", fixed}});
		o.lines.push_back("  [" + market + "] iteration " + std::to_string(it.state.iteration) + ": step "
		                  + fmt.text(step) + ", epsilon " + fmt.text(eps) + ", tight " + braces(tight) + ", F "
		                  + braces(fixed));
	}
}

inline void trace_levels(Outcome& o, const MaschlerResult& result, const std::vector<std::string>& names,
                         const std::string& market, const Rational& scale, const Formatter& fmt)
{
	json& trace = o.report["trace"];
	if (trace.is_null())
	{
		trace = json::array();
	}
	std::size_t level = 0;
	for (const MaschlerLevel& l : result.levels)
	{
		++level;
		json fixed = json::array();
		std::string text;
		for (const FixedSet& f : l.fixed)
		{
			std::vector<std::string> members = coalition_names(f.coalition, names);
			fixed.push_back(members);
			text += (text.empty() ? "" : " ") + braces(members);
		}
		Rational eps = l.epsilon * scale;
		trace.push_back(json{{"market", market}, {"level", level}, {"epsilon", fmt.number(eps)}, {"fixed", fixed}});
		o.lines.push_back("  [" + market + "] level " + std::to_string(level) + ": epsilon " + fmt.text(eps)
		                  + ", fixed " + text);
	}
}

inline Outcome cmd_value(const Options& opt)
{
	Formatter fmt(opt);
	Instance inst = io::load_instance(opt.instance);
	NormalizedInstance norm = normalize(inst);
	Coalition s = parse_coalition(opt.coalition, inst.player_names);
	CoalitionValue cv = value_general(norm, s);

	Outcome o;
	std::vector<std::string> members = coalition_names(s, inst.player_names);
	o.report["command"] = "value";
	o.report["coalition"] = members;
	o.report["value"] = fmt.number(cv.value);
	o.lines.push_back("coalition: " + braces(members));
	o.lines.push_back("v(S) = " + fmt.text(cv.value));

	if (s == Coalition::grand(inst.players()))
	{
		Rational alone;
		for (std::size_t i = 0; i < inst.players(); ++i)
		{
			alone += value_general(norm, Coalition(inst.players(), {i})).value;
		}
		Rational gain = cv.value - alone;
		o.report["stand_alone_total"] = fmt.number(alone);
		o.report["collaboration_gain"] = fmt.number(gain);
		o.lines.push_back("stand-alone total = " + fmt.text(alone));
		o.lines.push_back("collaboration gain = " + fmt.text(gain));
	}

	if (opt.plan)
	{
		json plan = json::array();
		o.lines.push_back("plan (player -> market units):");
		for (std::size_t i : s.members())
		{
			json row{{"player", inst.player_names[i]}};
			json flows = json::object();
			std::string line = "  " + inst.player_names[i] + ":";
			for (std::size_t j = 0; j < inst.markets(); ++j)
			{
				flows[inst.market_names[j]] = to_string(cv.plan[i][j]);
				line += " " + inst.market_names[j] + "=" + to_string(cv.plan[i][j]);
			}
			row["flows"] = flows;
			plan.push_back(row);
			o.lines.push_back(line);
		}
		o.report["plan"] = plan;
	}
	return o;
}

inline Outcome cmd_allocate(const Options& opt)
{
	Formatter fmt(opt);
	Instance inst = io::load_instance(opt.instance);
	NormalizedInstance norm = normalize(inst);
	const std::size_t n = inst.players();
	const std::vector<std::string>& names = inst.player_names;
	std::vector<std::size_t> markets = active_markets(norm);

	Outcome o;
	o.report["command"] = "allocate";
	Allocation x;
	std::string path;
	Outcome traced;

	auto need_uncapacitated = [&](const std::string& what) {
		if (!norm.uncapacitated())
		{
			throw unsupported_error(what + " needs unbounded capacities; finite capacities are only supported "
			                               "through --oracle (exhaustive, nucleolus n <= 12, shapley n <= 10)");
		}
	};
	auto zero_allocation = [&](Method method) {
		Allocation z;
		z.payoff.assign(n, Rational(0));
		z.method = method;
		z.in_core = true;
		return z;
	};

	if (opt.method == "nucleolus")
	{
		if (opt.oracle)
		{
			MaschlerResult r = nucleolus_bruteforce(make_value_oracle(norm), n);
			x = r.allocation;
			path = "exhaustive Maschler scheme";
			trace_levels(traced, r, names, "all", Rational(1), fmt);
		}
		else
		{
			need_uncapacitated("nucleolus");
			if (markets.size() > 1)
			{
				throw unsupported_error("the nucleolus of a multi-market game has no fast path; use --oracle "
				                        "(exhaustive, n <= 12) or --method sum-nucleoli");
			}
			if (markets.empty())
			{
				x = zero_allocation(Method::nucleolus);
			}
			else
			{
				SingleMarketGame g = to_single_market(norm, markets.front());
				PrimalDualResult r = nucleolus_primal_dual(g);
				x = r.allocation;
				trace_primal_dual(traced, r, g, names, inst.market_names[markets.front()], fmt);
			}
			path = "primal-dual";
		}
	}
	else if (opt.method == "shapley")
	{
		if (opt.oracle)
		{
			x = shapley_bruteforce(make_value_oracle(norm), n);
			path = "subset enumeration";
		}
		else
		{
			need_uncapacitated("shapley");
			x = shapley_multimarket(decompose(norm));
			path = "closed form per market";
		}
	}
	else if (opt.method == "sum-nucleoli")
	{
		need_uncapacitated("sum-nucleoli");
		MarketDecomposition dec = decompose(norm);
		if (opt.oracle)
		{
			x = zero_allocation(Method::sum_of_nucleoli);
			for (const MarketGame& mg : dec.markets)
			{
				check_enumerable(n, max_bruteforce_nucleolus_players);
				const SingleMarketGame& g = mg.game;
				ValueOracle v = [&g](const Coalition& s) { return value_single_market(g, g.to_sorted(s)); };
				MaschlerResult r = nucleolus_bruteforce(v, n);
				for (std::size_t i = 0; i < n; ++i)
				{
					x.payoff[i] += r.allocation.payoff[i] * g.scale();
				}
				trace_levels(traced, r, names, inst.market_names[mg.market], g.scale(), fmt);
			}
			x.grand_value = 0;
			for (const MarketGame& mg : dec.markets)
			{
				x.grand_value += mg.game.alpha(0) * mg.game.scale();
			}
			path = "exhaustive Maschler scheme per market";
		}
		else
		{
			x = sum_of_nucleoli(dec);
			for (const MarketGame& mg : dec.markets)
			{
				trace_primal_dual(traced, nucleolus_primal_dual(mg.game), mg.game, names,
				                  inst.market_names[mg.market], fmt);
			}
			path = "primal-dual per market";
		}
	}
	else if (opt.method == "core-point")
	{
		if (opt.oracle)
		{
			throw input_error("--oracle does not apply to core-point (it is already closed form)");
		}
		need_uncapacitated("core-point");
		x = core_point(decompose(norm));
		path = "best margin per market";
	}
	else
	{
		throw input_error("--method must be one of nucleolus, shapley, sum-nucleoli, core-point");
	}

	o.report["method"] = to_string(x.method);
	o.report["path"] = path;
	o.lines.push_back("method: " + std::string(to_string(x.method)) + " (" + path + ")");
	put_payoffs(o, x.payoff, names, fmt, opt.exact);
	o.report["grand_value"] = fmt.number(x.grand_value);
	o.lines.push_back("v(N) = " + fmt.text(x.grand_value));
	put_core(o, core_status(norm, x, max_report_core_check), names, fmt);
	if (opt.trace)
	{
		o.report["trace"] = traced.report["trace"].is_null() ? json::array() : traced.report["trace"];
		o.lines.push_back("trace:");
		if (traced.lines.empty())
		{
			o.lines.push_back("  (no iterations)");
		}
		for (const std::string& line : traced.lines)
		{
			o.lines.push_back(line);
		}
	}
	return o;
}

inline Outcome cmd_check(const Options& opt)
{
	Formatter fmt(opt);
	Instance inst = io::load_instance(opt.instance);
	NormalizedInstance norm = normalize(inst);
	const std::size_t n = inst.players();
	std::vector<Rational> payoff = io::load_allocation(opt.allocation, inst.player_names);

	Rational grand = value_general(norm, Coalition::grand(n)).value;
	Rational total;
	for (const Rational& xi : payoff)
	{
		total += xi;
	}
	if (total != grand)
	{
		throw input_error("allocation is not efficient: it distributes " + to_string(total) + " but v(N) = "
		                  + to_string(grand));
	}
	Allocation x{payoff, grand, Method::unspecified, std::nullopt};
	if (!(norm.uncapacitated() && active_markets(norm).size() == 1))
	{
		check_enumerable(n);
	}
	CoreStatus status = core_status(norm, x, max_enumeration_players);

	Outcome o;
	o.report["command"] = "check";
	put_payoffs(o, payoff, inst.player_names, fmt, opt.exact);
	o.report["grand_value"] = fmt.number(grand);
	o.lines.push_back("v(N) = " + fmt.text(grand));
	put_core(o, status, inst.player_names, fmt);
	if (status.witness)
	{
		std::vector<std::string> w = coalition_names(*status.witness, inst.player_names);
		o.report["min_excess"] = json{{"coalition", w}, {"excess", fmt.number(status.excess)}};
		o.lines.push_back("minimum excess: " + fmt.text(status.excess) + " at " + braces(w));
	}
	return o;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
	Options opt;
	CLI::App app{"coopshare: exact profit sharing for production-distribution games"};
	app.require_subcommand(1, 1);

	auto common = [&](CLI::App* sub) {
		sub->add_option("instance", opt.instance, "instance file (JSON)")->required();
		sub->add_option("--precision", opt.precision, "decimal digits in reports")
			->check(CLI::Range(0, 1000))
			->default_val(6);
		sub->add_flag("--exact", opt.exact, "print exact rationals only");
		sub->add_flag("--json-style", opt.json_style, "print the report as a JSON document");
	};

	CLI::App* value = app.add_subcommand("value", "value of a coalition");
	common(value);
	value->add_option("--coalition", opt.coalition, "comma-separated player names, or 'all'");
	value->add_flag("--plan", opt.plan, "print an optimal production plan");

	CLI::App* allocate = app.add_subcommand("allocate", "share v(N) among the players");
	common(allocate);
	allocate->add_option("--method", opt.method, "nucleolus | shapley | sum-nucleoli | core-point")->required();
	allocate->add_flag("--oracle", opt.oracle, "use the exhaustive oracle (exponential)");
	allocate->add_flag("--trace", opt.trace, "print the iteration log");

	CLI::App* check = app.add_subcommand("check", "test an allocation for core membership");
	common(check);
	check->add_option("allocation", opt.allocation, "allocation file (JSON)")->required();

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError& e)
	{
		int code = app.exit(e, out, err);
		return code == 0 ? exit_ok : exit_input;
	}

	try
	{
		detail::Outcome o;
		if (value->parsed())
		{
			o = detail::cmd_value(opt);
		}
		else if (allocate->parsed())
		{
			o = detail::cmd_allocate(opt);
		}
		else
		{
			o = detail::cmd_check(opt);
		}
		if (opt.json_style)
		{
			out << o.report.dump(2) << "\n";
		}
		else
		{
			for (const std::string& line : o.lines)
			{
				out << line << "\n";
			}
		}
		return exit_ok;
	}
	catch (const input_error& e)
	{
		err << "error: " << e.what() << "\n";
		return exit_input;
	}
	catch (const size_error& e)
	{
		err << "error: " << e.what() << "\n";
		return exit_size;
	}
	catch (const internal_error& e)
	{
		err << "internal error: " << e.what() << "\n";
		return exit_internal;
	}
	catch (const std::exception& e)
	{
		err << "internal error: " << e.what() << "\n";
		return exit_internal;
	}
}

} // namespace coopshare::cli

#endif // COOPSHARE_CLI_HPP
