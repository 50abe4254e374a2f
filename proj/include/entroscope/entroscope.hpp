#pragma once

#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"
#include "entroscope/parallel.hpp"
#include "entroscope/symbolic.hpp"
#include "entroscope/cocycle.hpp"
#include "entroscope/fiber.hpp"
#include "entroscope/skew.hpp"
#include "entroscope/entropy/scale.hpp"
#include "entroscope/entropy/slow_entropy.hpp"
#include "entroscope/entropy/sequence.hpp"
#include "entroscope/entropy/birkhoff.hpp"
#include "entroscope/io.hpp"
