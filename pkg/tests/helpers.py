from fractions import Fraction

from plansofai.blocksworld import gen_blocksworld
from plansofai.memory import CaseRecord, System


def record(bw, seed=0, n=4, system=System.S2, solved=None, wall_time=1.0, difficulty=None, plan=()):
    inst = gen_blocksworld(n, seed, bw)
    solved = inst.tot_goals if solved is None else solved
    r = CaseRecord.from_solution(inst, plan, solved, system, wall_time)
    if difficulty is not None:
        r = CaseRecord(**{**r.__dict__, "difficulty": difficulty})
    return r


def s1_record(bw, correctness: Fraction, seed=0):
    inst = gen_blocksworld(4, seed, bw)
    solved = correctness * inst.tot_goals
    assert solved.denominator == 1
    return CaseRecord.from_solution(inst, (), int(solved), System.S1, 0.01)
