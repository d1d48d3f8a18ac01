from django.contrib import admin

from .models import SimulationRun, StoredDesign


@admin.register(StoredDesign)
class StoredDesignAdmin(admin.ModelAdmin):
    list_display = ('name', 'm', 'k', 'block_size', 'source', 'created_at')
    list_filter = ('source', 'm', 'k')
    search_fields = ('name',)


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = ('design', 'active_effects', 'reps', 'power', 'type1_error', 'created_at')
