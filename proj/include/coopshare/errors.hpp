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
 * \file coopshare/errors.hpp
 *
 * \brief Exception hierarchy shared by every coopshare module.
 */

#ifndef COOPSHARE_ERRORS_HPP
#define COOPSHARE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coopshare {

/// Malformed or inconsistent input data (dimensions, signs, unknown names).
class input_error : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// A market with no demand at all: its game is identically zero.
class degenerate_market_error : public input_error
{
public:
	using input_error::input_error;
};

/// The requested method does not support this kind of instance
/// (finite capacities, several markets).
class unsupported_error : public input_error
{
public:
	using input_error::input_error;
};

/// An exponential enumeration was asked for on too many players.
class size_error : public std::length_error
{
public:
	using std::length_error::length_error;
};

/// An algorithmic invariant failed. Always a bug.
class internal_error : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

namespace detail {

inline void ensure(bool condition, const std::string& what)
{
	if (!condition)
	{
		throw internal_error(what);
	}
}

} // namespace detail

} // namespace coopshare

#endif // COOPSHARE_ERRORS_HPP
