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
 * \file coopshare/coopshare.hpp
 *
 * \brief Umbrella header for the computational modules.
 */

#ifndef COOPSHARE_COOPSHARE_HPP
#define COOPSHARE_COOPSHARE_HPP

#include <coopshare/coalition.hpp>
#include <coopshare/errors.hpp>
#include <coopshare/game.hpp>
#include <coopshare/lp.hpp>
#include <coopshare/multimarket.hpp>
#include <coopshare/nucleolus.hpp>
#include <coopshare/rational.hpp>
#include <coopshare/shapley.hpp>

#endif // COOPSHARE_COOPSHARE_HPP
