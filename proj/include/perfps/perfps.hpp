#pragma once

#include <perfps/error.hpp>
#include <perfps/exponent.hpp>
#include <perfps/fgl.hpp>
#include <perfps/field.hpp>
#include <perfps/multivar.hpp>
#include <perfps/proofdiag.hpp>
#include <perfps/series.hpp>
#include <perfps/substitute.hpp>
#include <perfps/substitution.hpp>
#include <perfps/textio.hpp>
