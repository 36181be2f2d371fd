from models.problems.instance import ProblemInstance
from models.problems.oracles import dykstra_project, projected_gradient_oracle, set_distance

__all__ = ["ProblemInstance", "dykstra_project", "projected_gradient_oracle", "set_distance"]
