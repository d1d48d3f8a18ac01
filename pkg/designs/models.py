from django.db import models

from designs.core import BlockOofaDesign, OofaDesign
from designs.managers import DesignQuerySet


class StoredDesign(models.Model):
    SOURCE_CHOICES = [
        ('fixture', 'Fixture'),
        ('constructed', 'Constructed'),
        ('uploaded', 'Uploaded'),
    ]

    name = models.CharField(max_length=255, unique=True)
    m = models.PositiveSmallIntegerField()
    k = models.PositiveSmallIntegerField(default=1)
    block_size = models.PositiveIntegerField()
    blocked = models.BooleanField(default=True)
    rows = models.JSONField(default=list)
    response = models.JSONField(null=True, blank=True)
    source = models.CharField(max_length=12, choices=SOURCE_CHOICES, default='uploaded')
    seed = models.BigIntegerField(null=True, blank=True)
    wlp = models.JSONField(default=dict, blank=True)
    provenance = models.JSONField(default=list, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    objects = DesignQuerySet.as_manager()

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.name} (m={self.m}, k={self.k}, n_B={self.block_size})"

    def to_design(self):
        """Rows are stored with the block label last when the design is blocked."""
        if self.blocked:
            return BlockOofaDesign.from_grid(self.rows, k=self.k, response=self.response)
        return OofaDesign(self.rows, self.response)

    @classmethod
    def fields_for(cls, design):
        return {
            'm': design.m,
            'k': design.k,
            'block_size': design.n // design.k if design.k else design.n,
            'blocked': design.blocked,
            'rows': design.to_grid(),
            'response': design.response.tolist() if design.response is not None else None,
        }


class SimulationRun(models.Model):
    design = models.ForeignKey(StoredDesign, on_delete=models.CASCADE, related_name='simulations')
    active_effects = models.PositiveSmallIntegerField()
    reps = models.PositiveIntegerField()
    alpha = models.FloatField()
    sigma = models.FloatField()
    seed = models.BigIntegerField()
    power = models.FloatField()
    type1_error = models.FloatField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.design.name} p={self.active_effects}: PW={self.power:.3f} TY1={self.type1_error:.3f}"
