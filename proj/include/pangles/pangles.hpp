#pragma once

#include "pangles/error.hpp"
#include "pangles/numkit.hpp"
#include "pangles/subspace.hpp"
#include "pangles/multiset.hpp"
#include "pangles/check.hpp"
#include "pangles/angles.hpp"
#include "pangles/projector_algebra.hpp"
#include "pangles/ritz.hpp"
#include "pangles/altproj.hpp"
#include "pangles/ddm1d.hpp"
#include "pangles/io.hpp"
#include "pangles/serialize.hpp"
