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

#include <coopshare/cli.hpp>
#include <coopshare/io.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace coopshare;
using ref::Rng;
using ref::uniform;

namespace {

Rational q(long num, long den = 1)
{
	return make_rational(num, den);
}

std::string fixture(const std::string& name)
{
	return std::string(COOPSHARE_FIXTURES_DIR) + "/" + name;
}

struct CliRun
{
	int code;
	std::string out;
	std::string err;
};

CliRun cli(std::initializer_list<std::string> args)
{
	std::vector<std::string> owned{"coopshare"};
	owned.insert(owned.end(), args.begin(), args.end());
	std::vector<const char*> argv;
	for (const std::string& a : owned)
	{
		argv.push_back(a.c_str());
	}
	std::ostringstream out;
	std::ostringstream err;
	int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
	return CliRun{code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text)
{
	std::string path = ::testing::TempDir() + name;
	std::ofstream(path) << text;
	return path;
}

nlohmann::ordered_json exact_payoffs(const std::string& report)
{
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(report);
	nlohmann::ordered_json out = nlohmann::ordered_json::object();
	for (const auto& row : doc["allocation"])
	{
		out[row["player"].get<std::string>()] = row["payoff"]["exact"];
	}
	return out;
}

TEST(Io, NumbersAreIntegersOrFractionStrings)
{
	using io::json;
	EXPECT_EQ(io::parse_number(json(3), "x"), q(3));
	EXPECT_EQ(io::parse_number(json("2/6"), "x"), q(1, 3));
	EXPECT_THROW(io::parse_number(json(0.5), "x"), input_error);
	EXPECT_THROW(io::parse_number(json("0.5"), "x"), input_error);
	EXPECT_THROW(io::parse_number(json(true), "x"), input_error);
	EXPECT_EQ(io::format_number(q(4)), json(4));
	EXPECT_EQ(io::format_number(q(-2, 3)), json("-2/3"));
}

TEST(Io, FixturesLoad)
{
	Instance one = io::load_instance(fixture("example1.json"));
	EXPECT_EQ(one.players(), 3U);
	EXPECT_EQ(one.demand[2][0], q(1, 3));
	Instance three = io::load_instance(fixture("example3.json"));
	EXPECT_EQ(three.markets(), 3U);
	Instance cap = io::load_instance(fixture("capacitated.json"));
	EXPECT_EQ(cap.capacity[0], q(3));
	EXPECT_FALSE(cap.capacity[2].has_value());
}

TEST(Io, RoundTripIsIdentity)
{
	Rng rng(51);
	for (int trial = 0; trial < 50; ++trial)
	{
		Instance inst = ref::random_instance(rng, static_cast<std::size_t>(uniform(rng, 1, 5)),
		                                     static_cast<std::size_t>(uniform(rng, 1, 4)), trial % 2 == 0);
		std::string text = io::serialize_instance(inst);
		Instance back = io::parse_instance(text);
		EXPECT_EQ(io::serialize_instance(back), text);
		EXPECT_EQ(back.cost, inst.cost);
		EXPECT_EQ(back.demand, inst.demand);
		EXPECT_EQ(back.capacity, inst.capacity);
	}
	Instance inst = io::load_instance(fixture("example3.json"));
	EXPECT_EQ(io::parse_instance(io::serialize_instance(inst)).price, inst.price);
}

TEST(Io, DiagnosticsNameTheField)
{
	auto message = [](const std::string& text) {
		try
		{
			io::parse_instance(text, "bad.json");
		}
		catch (const input_error& e)
		{
			return std::string(e.what());
		}
		return std::string();
	};
	const std::string head = R"({"players": ["a", "b"], "markets": [{"name": "m", "price": 3}], )";
	EXPECT_NE(message(head + R"("cost": [[1], [1]], "demand": [[1], [1.5]]})").find("demand[1][0]"), std::string::npos);
	EXPECT_NE(message(head + R"("cost": [[1]], "demand": [[1], [1]]})").find("cost"), std::string::npos);
	EXPECT_NE(message(head + R"("cost": [[1], [1]], "demand": [[1], [1]], "capacity": [0, "inf"]})").find("capacity"),
	          std::string::npos);
	EXPECT_NE(message(R"({"players": ["a", "a"]})").find("duplicate"), std::string::npos);
	EXPECT_NE(message("{ not json").find("bad.json"), std::string::npos);
	EXPECT_THROW(io::load_instance(fixture("does-not-exist.json")), input_error);
}

TEST(Io, Allocations)
{
	std::vector<std::string> players{"a", "b"};
	EXPECT_EQ(io::parse_allocation(io::json::parse(R"({"allocation": {"b": "1/2", "a": 1}})"), players),
	          (std::vector<Rational>{q(1), q(1, 2)}));
	EXPECT_THROW(io::parse_allocation(io::json::parse(R"({"allocation": {"a": 1}})"), players), input_error);
	EXPECT_THROW(io::parse_allocation(io::json::parse(R"({"allocation": {"a": 1, "c": 2}})"), players), input_error);
}

TEST(Cli, ValueOfExampleThree)
{
	CliRun r = cli({"value", fixture("example3.json"), "--json-style"});
	ASSERT_EQ(r.code, 0) << r.err;
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(r.out);
	EXPECT_EQ(doc["value"]["exact"], "6");
	EXPECT_EQ(doc["collaboration_gain"]["exact"], "4");

	CliRun single = cli({"value", fixture("example3.json"), "--coalition", "p1", "--exact"});
	ASSERT_EQ(single.code, 0);
	EXPECT_NE(single.out.find("v(S) = 2"), std::string::npos);
	EXPECT_EQ(single.out.find("2.0"), std::string::npos);

	EXPECT_EQ(cli({"value", fixture("example3.json"), "--coalition", ""}).code, 2);
	EXPECT_EQ(cli({"value", fixture("example3.json"), "--coalition", "zed"}).code, 2);
}

TEST(Cli, ValueWithPlanAndPrecision)
{
	CliRun r = cli({"value", fixture("example1.json"), "--coalition", "p1,p3", "--plan", "--precision", "3"});
	ASSERT_EQ(r.code, 0);
	EXPECT_NE(r.out.find("v(S) = 2/3 (0.667)"), std::string::npos);
	EXPECT_NE(r.out.find("p1: m=2/3"), std::string::npos);
}

TEST(Cli, AllocateExampleThree)
{
	CliRun son = cli({"allocate", fixture("example3.json"), "--method", "sum-nucleoli", "--json-style"});
	ASSERT_EQ(son.code, 0) << son.err;
	EXPECT_EQ(exact_payoffs(son.out), nlohmann::ordered_json::parse(R"({"p1":"3","p2":"3/2","p3":"3/2"})"));

	CliRun nuc = cli({"allocate", fixture("example3.json"), "--method", "nucleolus", "--oracle", "--json-style"});
	ASSERT_EQ(nuc.code, 0) << nuc.err;
	EXPECT_EQ(exact_payoffs(nuc.out), nlohmann::ordered_json::parse(R"({"p1":"10/3","p2":"4/3","p3":"4/3"})"));
	EXPECT_EQ(nlohmann::ordered_json::parse(nuc.out)["core"]["in_core"], true);

	CliRun multi = cli({"allocate", fixture("example3.json"), "--method", "nucleolus"});
	EXPECT_EQ(multi.code, 2);
	EXPECT_NE(multi.err.find("sum-nucleoli"), std::string::npos);
}

TEST(Cli, AllocateTwoPlayerNucleolusWithTrace)
{
	CliRun r = cli({"allocate", fixture("two_player.json"), "--method", "nucleolus", "--trace", "--json-style"});
	ASSERT_EQ(r.code, 0) << r.err;
	EXPECT_EQ(exact_payoffs(r.out), nlohmann::ordered_json::parse(R"({"a":"2","b":"1"})"));
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(r.out);
	ASSERT_EQ(doc["trace"].size(), 1U);
	EXPECT_EQ(doc["trace"][0]["step"]["exact"], "1/2");
	EXPECT_EQ(doc["trace"][0]["tight"], nlohmann::ordered_json::parse(R"(["b"])"));

	// Unit demands double every payoff.
	std::string doubled = temp_file("doubled.json", R"({"players": ["a", "b"], "markets": [{"name": "m", "price": 4}],
		"cost": [[1], [3]], "demand": [[1], [1]]})");
	CliRun d = cli({"allocate", doubled, "--method", "nucleolus", "--json-style"});
	EXPECT_EQ(exact_payoffs(d.out), nlohmann::ordered_json::parse(R"({"a":"4","b":"2"})"));
}

TEST(Cli, AllocateCapacitated)
{
	EXPECT_EQ(cli({"allocate", fixture("capacitated.json"), "--method", "shapley"}).code, 2);
	EXPECT_EQ(cli({"allocate", fixture("capacitated.json"), "--method", "core-point"}).code, 2);
	CliRun r = cli({"allocate", fixture("capacitated.json"), "--method", "nucleolus", "--oracle", "--json-style"});
	ASSERT_EQ(r.code, 0) << r.err;
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(r.out);
	EXPECT_EQ(doc["core"]["in_core"], true);
	EXPECT_EQ(doc["grand_value"]["exact"], "26");
}

TEST(Cli, AllocateAllMethodsOnSingleMarket)
{
	for (const char* method : {"nucleolus", "shapley", "sum-nucleoli", "core-point"})
	{
		CliRun r = cli({"allocate", fixture("example1.json"), "--method", method});
		EXPECT_EQ(r.code, 0) << method << ": " << r.err;
	}
	EXPECT_EQ(cli({"allocate", fixture("example1.json"), "--method", "banzhaf"}).code, 2);
	EXPECT_EQ(cli({"allocate", fixture("example1.json"), "--method", "core-point", "--oracle"}).code, 2);
}

TEST(Cli, CheckExampleThree)
{
	CliRun ok = cli({"check", fixture("example3.json"), fixture("example3_equal_split.json"), "--json-style"});
	ASSERT_EQ(ok.code, 0) << ok.err;
	EXPECT_EQ(nlohmann::ordered_json::parse(ok.out)["core"]["in_core"], true);

	CliRun bad = cli({"check", fixture("example3.json"), fixture("example3_all_to_p1.json"), "--json-style"});
	ASSERT_EQ(bad.code, 0) << bad.err;
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(bad.out);
	EXPECT_EQ(doc["core"]["in_core"], false);
	EXPECT_EQ(doc["core"]["violated_coalition"], nlohmann::ordered_json::parse(R"(["p2","p3"])"));
	EXPECT_EQ(doc["core"]["excess"]["exact"], "-2");

	std::string short_alloc = temp_file("short.json", R"({"allocation": {"p1": 1, "p2": 1, "p3": 1}})");
	CliRun ineff = cli({"check", fixture("example3.json"), short_alloc});
	EXPECT_EQ(ineff.code, 2);
	EXPECT_NE(ineff.err.find("efficient"), std::string::npos);

	std::string stranger = temp_file("stranger.json", R"({"allocation": {"p1": 6, "p2": 0, "zed": 0}})");
	EXPECT_EQ(cli({"check", fixture("example3.json"), stranger}).code, 2);
}

TEST(Cli, ExitCodes)
{
	EXPECT_EQ(cli({}).code, 2);
	EXPECT_EQ(cli({"value"}).code, 2);
	EXPECT_EQ(cli({"frobnicate", fixture("example1.json")}).code, 2);
	EXPECT_EQ(cli({"value", fixture("missing.json")}).code, 2);
	EXPECT_EQ(cli({"allocate", fixture("example1.json")}).code, 2);
	EXPECT_EQ(cli({"--help"}).code, 0);

	std::string big = "{\"players\": [";
	std::string cost;
	std::string demand;
	for (int i = 0; i < 13; ++i)
	{
		big += std::string(i ? "," : "") + "\"p" + std::to_string(i) + "\"";
		cost += std::string(i ? "," : "") + "[1]";
		demand += std::string(i ? "," : "") + "[1]";
	}
	big += "], \"markets\": [{\"name\": \"m\", \"price\": 3}], \"cost\": [" + cost + "], \"demand\": [" + demand + "]}";
	std::string path = temp_file("big.json", big);
	EXPECT_EQ(cli({"allocate", path, "--method", "nucleolus", "--oracle"}).code, 3);
	EXPECT_EQ(cli({"allocate", path, "--method", "nucleolus"}).code, 0);
}

TEST(Cli, ReportsAreDeterministic)
{
	for (auto args : std::vector<std::vector<std::string>>{
		     {"allocate", fixture("example3.json"), "--method", "sum-nucleoli", "--trace"},
		     {"allocate", fixture("example3.json"), "--method", "nucleolus", "--oracle", "--trace", "--json-style"},
		     {"value", fixture("capacitated.json"), "--plan"}})
	{
		auto run_once = [&] {
			std::vector<const char*> argv{"coopshare"};
			for (const std::string& a : args)
			{
				argv.push_back(a.c_str());
			}
			std::ostringstream out;
			std::ostringstream err;
			int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
			return std::to_string(code) + out.str() + err.str();
		};
		EXPECT_EQ(run_once(), run_once());
	}
}

} // namespace
