#pragma once

#include "fockseq/chaos.hpp"
#include "fockseq/convolution.hpp"
#include "fockseq/error.hpp"
#include "fockseq/functional.hpp"
#include "fockseq/gamma_index.hpp"
#include "fockseq/io.hpp"
#include "fockseq/sequence.hpp"
