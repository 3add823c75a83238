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
 * \file coopshare/rational.hpp
 *
 * \brief Exact rational scalar used by every computation in coopshare.
 *
 * Rational is GMP's mpq_class. Every arithmetic result is kept in canonical
 * form (positive denominator, coprime numerator and denominator). Values
 * built from a raw numerator/denominator pair must go through
 * make_rational(), which canonicalizes.
 *
 * mpq_class uses expression templates, so never bind an arithmetic
 * expression to `auto`; spell out `Rational`.
 */

#ifndef COOPSHARE_RATIONAL_HPP
#define COOPSHARE_RATIONAL_HPP

#include <coopshare/errors.hpp>

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace coopshare {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den)
{
	if (den == 0)
	{
		throw input_error("rational with zero denominator");
	}
	Rational r(num, den);
	r.canonicalize();
	return r;
}

inline Rational make_rational(long num, long den = 1)
{
	return make_rational(Integer(num), Integer(den));
}

inline bool is_integer(const Rational& r)
{
	return r.get_den() == 1;
}

/// Parses "p", "-p", "p/q" or "-p/q" (decimal digits only). Anything that
/// looks like a floating-point literal is rejected.
inline Rational parse_rational(std::string_view text)
{
	auto fail = [&](const char* why) {
		throw input_error("invalid rational '" + std::string(text) + "': " + why);
	};

	std::size_t pos = 0;
	bool negative = false;
	if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
	{
		negative = text[pos] == '-';
		++pos;
	}
	auto digits = [&](std::string& out) {
		std::size_t start = pos;
		while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
		{
			++pos;
		}
		out.assign(text.substr(start, pos - start));
		return !out.empty();
	};

	std::string num;
	std::string den = "1";
	if (!digits(num))
	{
		fail("expected digits");
	}
	if (pos < text.size() && text[pos] == '/')
	{
		++pos;
		if (!digits(den))
		{
			fail("expected denominator digits");
		}
	}
	if (pos != text.size())
	{
		if (text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E')
		{
			fail("floating-point literals are not accepted, write p/q");
		}
		fail("unexpected trailing characters");
	}
	Integer n(num, 10);
	Integer d(den, 10);
	if (d == 0)
	{
		fail("zero denominator");
	}
	if (negative)
	{
		n = -n;
	}
	return make_rational(n, d);
}

/// Canonical "p/q" rendering, or "p" for integers.
inline std::string to_string(const Rational& r)
{
	return r.get_str(10);
}

/// Decimal rendering with `digits` fractional digits, rounded half away
/// from zero. Presentation only.
inline std::string to_decimal(const Rational& r, int digits)
{
	if (digits < 0)
	{
		digits = 0;
	}
	Integer scale;
	mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));

	Integer num = abs(r.get_num()) * scale;
	const Integer& den = r.get_den();
	Integer scaled = (2 * num + den) / (2 * den);

	std::string body = scaled.get_str(10);
	if (digits > 0)
	{
		if (body.size() <= static_cast<std::size_t>(digits))
		{
			body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
		}
		body.insert(body.size() - static_cast<std::size_t>(digits), ".");
	}
	if (r < 0 && scaled != 0)
	{
		body.insert(0, "-");
	}
	return body;
}

} // namespace coopshare

#endif // COOPSHARE_RATIONAL_HPP
